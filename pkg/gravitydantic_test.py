# -*- coding: utf-8 -*-
"""
RUN TESTS FOR GRAVITYDANTIC USING JSON CONFIGS AND CLOSED FORMS
"""
# Import functions and models
import gravitydantic as gd
import gravitydantic.models as gm
from gravitydantic.cli import main

# Import other packages
from click.testing import CliRunner
import json
import math
import numpy as np
import pytest


def _static_pair(d: float, T: float = 10.0, m1: float = 1.0, m2: float = 1.0):
    w1 = gm.make_static_worldline(m1, (0.0, 0.0, 0.0), T)
    w2 = gm.make_static_worldline(m2, (d, 0.0, 0.0), T)
    return w1, w2


def _handmade_functionals() -> gm.FunctionalSet:
    deltas = {"L1L2": 3.0, "L1R2": 1.0, "R1L2": 0.5, "R1R2": 2.0}
    hadamards = {"L1L2": 0.4, "L1R2": 0.1, "R1L2": 0.2, "R1R2": 0.3}
    return gm.FunctionalSet(
        deltas={
            k: gm.PairFunctional(value=v, kind="RadiationDelta")
            for k, v in deltas.items()
        },
        hadamards={
            k: gm.PairFunctional(value=v, kind="Hadamard") for k, v in hadamards.items()
        },
        noise=gm.NoiseTerms(
            cutoff=0.01, l_v_1=0.2, l_i_1=0.15, l_v_2=0.2, l_i_2=0.15
        ),
    )


class TestCore:
    """
    TESTS FOR UNITS, WORLDLINES AND BRANCH LAYOUTS
    """

    def test_units(self):
        """
        Test the default coupling and the SI conversions of the units section.
        """
        units = gm.UnitsSystem()
        assert units.G == pytest.approx(
            1.054571817e-34 * 6.6743e-11 / 299792458.0**3 / 1e-12, rel=1e-6
        )
        assert units.time_to_internal(1.0) == pytest.approx(2.99792458e14, rel=1e-12)
        assert units.parse_quantity("1e-6 m", "length") == pytest.approx(1.0)
        with pytest.raises(ValueError):
            units.parse_quantity("1 s", "length")
        with pytest.raises(ValueError):
            gm.UnitsSystem(c_fixed=2.0)

    def test_collinear_layout(self):
        """
        Test the pair distances of the collinear layout with offset and separation 1.
        """
        experiment = gm.ExperimentSpec(
            m1=1.0, m2=1.0, separation=1.0, offset=1.0, duration=10.0
        )
        config = experiment.build()
        distances = {
            label: gm.hull_distance(w1, w2) for label, w1, w2 in config.pairs()
        }
        assert distances == pytest.approx(
            {"L1L2": 2.0, "L1R2": 3.0, "R1L2": 1.0, "R1R2": 2.0}
        )
        assert config.min_separation == pytest.approx(1.0)
        assert not config.closed_arms

    def test_split_worldline(self):
        """
        Test that a split branch leaves and returns to its base and holds in between.
        """
        w = gm.make_split_worldline(1.0, (0.0, 0.0, 0.0), (0.5, 0.0, 0.0), 2.0, 8.0)
        assert w.position(0.0) == pytest.approx([0.0, 0.0, 0.0])
        assert w.position(4.0) == pytest.approx([0.5, 0.0, 0.0])
        assert w.position(8.0) == pytest.approx([0.0, 0.0, 0.0])
        assert w.breakpoints() == (2.0, 6.0)
        assert w.max_speed == pytest.approx(1.875 * 0.5 / 2.0)
        config = gm.ExperimentSpec(
            family="split",
            m1=1.0,
            m2=1.0,
            separation=1.0,
            offset=1.0,
            duration=8.0,
            ramp_time=2.0,
        ).build()
        assert config.closed_arms
        assert gm.branches_congruent(config.l1, config.r1)

    def test_superluminal_ramp(self):
        """
        Test that a ramp implying a speed of light or more is rejected.
        """
        with pytest.raises(ValueError, match="ramp_time"):
            gm.make_split_worldline(1.0, (0, 0, 0), (2.0, 0, 0), 1.0, 8.0)
        with pytest.raises(ValueError, match="ramp_time"):
            gm.ExperimentSpec(
                family="split",
                m1=1.0,
                m2=1.0,
                separation=1.0,
                offset=2.0,
                duration=8.0,
                ramp_time=1.0,
            )

    def test_get_worldline(self):
        """
        Test that the family field selects the worldline model.
        """
        w = gm.get_worldline(
            {"family": "static", "mass": 1.0, "duration": 5.0, "point": [1, 2, 3]}
        )
        assert isinstance(w, gm.StaticWorldline)
        assert w.position(2.0) == pytest.approx([1.0, 2.0, 3.0])
        with pytest.raises(ValueError):
            gm.get_worldline({"family": "circular", "mass": 1.0, "duration": 5.0})

    def test_four_velocity_domain(self):
        """
        Test that four-velocities outside the window raise DomainError.
        """
        w = gm.make_uniform_worldline(1.0, (0, 0, 0), (0.6, 0, 0), 10.0)
        u = w.four_velocity(1.0)
        assert u.minkowski(u) == pytest.approx(-1.0)
        with pytest.raises(gm.DomainError):
            w.four_velocity(11.0)

    def test_si_round_trip(self):
        """
        Test that SI quantities survive conversion to internal units and back.
        """
        units = gm.UnitsSystem()
        for value in (1e-14, 3.7e-6, 1.0, 2.5e3):
            assert units.length_to_si(units.length_to_internal(value)) == (
                pytest.approx(value, rel=1e-12)
            )
            assert units.time_to_si(units.time_to_internal(value)) == pytest.approx(
                value, rel=1e-12
            )
            assert units.mass_to_si(units.mass_to_internal(value)) == pytest.approx(
                value, rel=1e-12
            )

    def test_zero_offset_split(self):
        """
        Test that a split of zero offset stays on the static branch at all times.
        """
        common = dict(m1=1.0, m2=1.0, separation=1.0, offset=0.0, duration=8.0)
        split = gm.ExperimentSpec(family="split", ramp_time=2.0, **common).build()
        static = gm.ExperimentSpec(**common).build()
        for t in np.linspace(0.0, 8.0, 1000):
            for label in ("l1", "r1", "l2", "r2"):
                z, v = getattr(split, label).kinematics(t)
                assert z == pytest.approx(getattr(static, label).kinematics(t)[0])
                assert v == (0.0, 0.0, 0.0)
        assert all(w.max_speed == 0.0 for w in split.branches().values())


class TestRetarded:
    """
    TESTS FOR LIGHT-CONE SOLVES AND THE PAIR HAMILTONIAN
    """

    def test_static_source(self):
        """
        Test the retarded time of a static source against t - d.
        """
        source = gm.make_static_worldline(1.0, (1.0, 0.0, 0.0), 10.0)
        solution = gm.solve_retarded_time(source, gm.FourVector((5.0, 0.0, 0.0, 0.0)))
        assert solution.t_r == pytest.approx(4.0, abs=1e-12)
        assert solution.distance == pytest.approx(1.0)
        assert solution.doppler_factor == pytest.approx(1.0)
        assert solution.in_window

        # Emission before the window start
        early = gm.solve_retarded_time(source, gm.FourVector((0.5, 0.0, 0.0, 0.0)))
        assert early.t_r == pytest.approx(-0.5, abs=1e-12)
        assert not early.in_window

    def test_moving_source(self):
        """
        Test the retarded time of a uniformly moving source against its closed form.
        """
        source = gm.make_uniform_worldline(1.0, (0, 0, 0), (0.5, 0, 0), 20.0)
        solution = gm.solve_retarded_time(source, gm.FourVector((10.0, 0, 0, 0)))
        assert solution.t_r == pytest.approx(20.0 / 3.0, rel=1e-12)
        assert solution.doppler_factor == pytest.approx(1.5, rel=1e-9)

    def test_bitensor_at_rest(self):
        """
        Test that the contraction of two four-velocities at rest is 1.
        """
        u = gm.FourVector((1.0, 0.0, 0.0, 0.0))
        assert gm.bitensor_contract(u, u) == pytest.approx(1.0)

    def test_newtonian_limit(self):
        """
        Test that the pair Hamiltonian reduces to -G m1 m2 / d.
        """
        w1, w2 = _static_pair(1.0)
        assert gm.pair_hamiltonian(w1, w2, 5.0, G=2.0) == pytest.approx(-2.0, rel=1e-10)
        assert gm.pair_hamiltonian(w1, w2, 0.5, G=2.0) == 0.0

        # Slow motion deviates at second order in the speed
        mover = gm.make_uniform_worldline(1.0, (1.0, 0.0, 0.0), (0.0, 1e-3, 0.0), 10.0)
        rest = gm.make_static_worldline(1.0, (0.0, 0.0, 0.0), 10.0)
        newtonian = -1.0 / math.hypot(1.0, 5e-3)
        assert gm.pair_hamiltonian(rest, mover, 5.0) == pytest.approx(
            newtonian, rel=1e-4
        )

    def test_newtonian_decay(self):
        """
        Test that the departure from -G m1 m2 / d shrinks with the square of the speed.
        """

        def _deviation(v: float) -> float:
            mover = gm.make_uniform_worldline(1.0, (1.0, 0.0, 0.0), (0.0, v, 0.0), 10.0)
            rest = gm.make_static_worldline(1.0, (0.0, 0.0, 0.0), 10.0)
            newtonian = -1.0 / math.hypot(1.0, 5.0 * v)
            value = gm.pair_hamiltonian(rest, mover, 5.0)
            return abs(value - newtonian) / abs(newtonian)

        slow, slower = _deviation(1e-2), _deviation(1e-3)
        assert slower < 1e-4
        assert slower < slow / 20.0

    def test_singular_and_outside(self):
        """
        Test the errors for coincident worldlines and times outside the window.
        """
        w1, w2 = _static_pair(1.0)
        with pytest.raises(gm.DomainError):
            gm.pair_hamiltonian(w1, w2, 11.0)
        with pytest.raises(gm.SingularityError):
            gm.pair_hamiltonian(w1, w1, 5.0)


class TestKernels:
    """
    TESTS FOR THE RADIATION, HADAMARD AND NOISE FUNCTIONALS
    """

    def test_static_delta(self):
        """
        Test Δ of two static branches against 2 m1 m2 (T - d) / (4π d).
        """
        w1, w2 = _static_pair(1.0, m1=2.0, m2=3.0)
        value = gm.delta_pair_functional(w1, w2).value
        assert value == pytest.approx(gm.static_delta(2.0, 3.0, 10.0, 1.0), rel=1e-9)
        assert value == pytest.approx(2.0 * 6.0 * 9.0 / (4.0 * math.pi), rel=1e-9)
        assert gm.delta_pair_functional(w2, w1).value == pytest.approx(value, rel=1e-12)

    def test_spacelike_delta(self):
        """
        Test that Δ is exactly zero when the window is shorter than the separation.
        """
        w1, w2 = _static_pair(1.0, T=0.5)
        assert gm.delta_pair_functional(w1, w2).value == 0.0
        feynman = gm.feynman_pair_functional(w1, w2)
        assert feynman.value.imag == 0.0
        assert feynman.value.real > 0.0

    def test_causal_parts(self):
        """
        Test that Δ is the sum and E the difference of the advanced and retarded parts.
        """
        w1, w2 = _static_pair(1.0)
        retarded = gm.retarded_pair_functional(w1, w2).value
        advanced = gm.advanced_pair_functional(w1, w2).value
        assert gm.causal_pair_functional(w1, w2).value == pytest.approx(
            advanced - retarded, abs=1e-12
        )
        assert gm.delta_pair_functional(w1, w2).value == pytest.approx(
            advanced + retarded, rel=1e-12
        )

    @pytest.mark.parametrize("d", [1.0, 2.0, 3.0])
    def test_static_hadamard(self, d):
        """
        Test the extrapolated Hadamard functional against both closed forms.
        """
        w1, w2 = _static_pair(d)
        value = gm.hadamard_pair_functional(w1, w2).value
        assert value == pytest.approx(gm.static_hadamard(1.0, 1.0, 10.0, d), rel=1e-4)
        assert gm.static_hadamard_cauchy(1.0, 1.0, 10.0, d) == pytest.approx(
            gm.static_hadamard(1.0, 1.0, 10.0, d), rel=1e-8
        )

    @pytest.mark.parametrize("T, d", [(100.0, 1.0), (1000.0, 1.0), (100.0, 10.0)])
    def test_static_oracle_grid(self, T, d):
        """
        Test Δ and H of static branches against the closed forms on long windows.
        """
        w1, w2 = _static_pair(d, T=T)
        assert gm.delta_pair_functional(w1, w2).value == pytest.approx(
            gm.static_delta(1.0, 1.0, T, d), rel=1e-6
        )
        assert gm.hadamard_pair_functional(w1, w2).value == pytest.approx(
            gm.static_hadamard(1.0, 1.0, T, d), rel=1e-4
        )

    def test_hadamard_bilinear_symmetric(self):
        """
        Test that H scales with both masses and does not depend on argument order.
        """
        w1, w2 = _static_pair(2.0, m1=2.0, m2=3.0)
        value = gm.hadamard_pair_functional(w1, w2).value
        assert gm.hadamard_pair_functional(w2, w1).value == pytest.approx(
            value, rel=1e-8
        )
        for scale in (2.0, 10.0):
            heavy1, heavy2 = _static_pair(2.0, m1=2.0 * scale, m2=3.0 * scale)
            assert gm.hadamard_pair_functional(heavy1, heavy2).value == (
                pytest.approx(scale**2 * value, rel=1e-9)
            )

    def test_hadamard_errors(self):
        """
        Test that touching branches and bad ε schedules are rejected.
        """
        w1, _ = _static_pair(1.0)
        with pytest.raises(gm.AccuracyError):
            gm.hadamard_pair_functional(w1, w1)
        w1, w2 = _static_pair(1.0)
        with pytest.raises(ValueError):
            gm.hadamard_pair_functional(w1, w2, epsilon_schedule=[1e-2, 2e-2, 1e-3])
        with pytest.raises(ValueError):
            gm.hadamard_pair_functional(w1, w2, epsilon_schedule=[1e-2, 5e-3])

    def test_compose_feynman(self):
        """
        Test that G = -(i/2) Δ + (1/2) H exactly.
        """
        delta = gm.PairFunctional(value=3.0, kind="RadiationDelta")
        hadamard = gm.PairFunctional(value=0.5, kind="Hadamard")
        feynman = gm.compose_feynman(delta, hadamard)
        assert feynman.kind == "FeynmanG"
        assert feynman.value == complex(0.25, -1.5)

    def test_static_noise(self):
        """
        Test the noise of static branches against the closed forms.
        """
        w1, w2 = _static_pair(1.0)
        self_noise, _ = gm.single_branch_noise(w1, w1, 0.01)
        assert self_noise == gm.static_self_noise(1.0, 10.0, 0.01)
        cross_noise, _ = gm.single_branch_noise(w1, w2, 0.01)
        assert cross_noise == pytest.approx(
            gm.static_cross_noise(1.0, 1.0, 10.0, 1.0, 0.01), rel=1e-5
        )
        assert cross_noise < self_noise

    def test_noise_terms(self):
        """
        Test that coincident branches have no net noise and separated ones do.
        """
        closed = gm.ExperimentSpec(
            m1=1.0, m2=1.0, separation=1.0, offset=0.0, duration=10.0
        ).build()
        noise = gm.vacuum_noise_terms(closed)
        assert noise.differences == (0.0, 0.0)
        assert noise.warnings == []
        opened = gm.ExperimentSpec(
            m1=1.0, m2=1.0, separation=1.0, offset=1.0, duration=10.0
        ).build()
        noise = gm.vacuum_noise_terms(opened)
        assert noise.l_i_1 < noise.l_v_1
        assert noise.l_i_2 < noise.l_v_2
        assert noise.cutoff == pytest.approx(0.01)
        assert any("open" in w for w in noise.warnings)

    def test_noise_inequality(self):
        """
        Test L_I ≤ L_V over split offsets, with equality only for coincident branches.
        """
        for offset in (0.0, 0.02, 0.05, 0.1, 0.2, 0.3, 0.4, 0.6, 0.8, 1.0):
            config = gm.ExperimentSpec(
                family="split",
                m1=1.0,
                m2=1.0,
                separation=1.0,
                offset=offset,
                duration=4.0,
                ramp_time=1.0,
            ).build()
            assert config.closed_arms
            noise = gm.vacuum_noise_terms(config)
            for l_v, l_i in ((noise.l_v_1, noise.l_i_1), (noise.l_v_2, noise.l_i_2)):
                if offset == 0.0:
                    assert l_i == pytest.approx(l_v, rel=1e-8)
                else:
                    assert l_i < l_v

    def test_noise_cutoff_sensitivity(self):
        """
        Test that closed arms make the noise differences insensitive to the cutoff.
        """
        config = gm.ExperimentSpec(
            family="split",
            m1=1.0,
            m2=1.0,
            separation=1.0,
            offset=0.5,
            duration=4.0,
            ramp_time=1.0,
        ).build()
        noise = gm.vacuum_noise_terms(config, gm.NumericsSettings())
        assert noise.cutoff_sensitivity is None
        numerics = gm.NumericsSettings(noise_sensitivity=True)
        noise = gm.vacuum_noise_terms(config, numerics)
        assert noise.warnings == []
        assert 0.0 <= noise.cutoff_sensitivity < 0.05

    def test_noise_decays_against_delta(self):
        """
        Test that L_V - L_I shrinks relative to the Δ combination as T doubles.
        """
        ratios = []
        for T in (10.0, 20.0, 40.0):
            config = gm.ExperimentSpec(
                m1=1.0, m2=1.0, separation=1.0, offset=1.0, duration=T
            ).build()
            functionals = gm.compute_functionals(config, hadamards=False)
            difference = functionals.noise.differences[0]
            ratios.append(difference / abs(functionals.delta_combination))
        assert ratios[0] > ratios[1] > ratios[2] > 0.0

    def test_congruent_branch_noise(self):
        """
        Test that the mirror-image branches of one particle have the same self noise.
        """
        config = gm.ExperimentSpec(
            family="split",
            m1=1.0,
            m2=1.0,
            separation=1.0,
            offset=0.2,
            duration=4.0,
            ramp_time=1.0,
        ).build()
        numerics = gm.NumericsSettings(epsrel=1e-6, epsabs=1e-8)
        left, _ = gm.single_branch_noise(config.l1, config.l1, 0.1, numerics)
        right, _ = gm.single_branch_noise(config.r1, config.r1, 0.1, numerics)
        assert left == pytest.approx(right, rel=1e-6)

    def test_closed_form_functionals(self):
        """
        Test that long static windows switch to the closed forms.
        """
        config = gm.ExperimentSpec(
            m1=1.0, m2=1.0, separation=1.0, offset=1.0, duration=1e8
        ).build()
        functionals = gm.compute_functionals(config)
        assert functionals.method == "closed_form"
        assert functionals.delta_combination == pytest.approx(
            -1e8 / (6.0 * math.pi), rel=1e-9
        )
        assert functionals.hadamard_combination == pytest.approx(
            -math.log(0.75) / math.pi**2, rel=1e-6
        )

    def test_parallel_matches_serial(self):
        """
        Test that results do not depend on the number of joblib workers.
        """
        config = gm.ExperimentSpec(
            m1=1.0, m2=1.0, separation=1.0, offset=1.0, duration=10.0
        ).build()
        serial = gm.compute_functionals(config, gm.NumericsSettings(), noise=False)
        parallel = gm.compute_functionals(
            config, gm.NumericsSettings(n_jobs=2), noise=False
        )
        for label in serial.deltas:
            assert serial.deltas[label].value == parallel.deltas[label].value
            assert serial.hadamards[label].value == parallel.hadamards[label].value

    def test_numerics_settings(self):
        """
        Test the defaults and the job-count validator of the numerics section.
        """
        numerics = gm.NumericsSettings()
        assert numerics.epsrel == 1e-7
        assert gm.default_epsilon_schedule(numerics, 2.0) == pytest.approx(
            [4e-2 * 0.5**k for k in range(5)]
        )
        with pytest.raises(ValueError):
            gm.NumericsSettings(n_jobs=0)
        with pytest.raises(ValueError):
            gm.NumericsSettings(unknown=1)


class TestEntanglement:
    """
    TESTS FOR DENSITY MATRICES AND NEGATIVITY
    """

    def test_bell_and_product(self):
        """
        Test the negativity of a Bell state and of a product state.
        """
        bell = gm.pure_state([1.0, 0.0, 0.0, 1.0])
        assert gm.negativity(bell) == pytest.approx(0.5, abs=1e-12)
        assert gm.negativity(bell, 1) == pytest.approx(0.5, abs=1e-12)
        product = gm.pure_state(np.kron([1.0, 1.0j], [1.0, 2.0]))
        assert gm.negativity(product) == pytest.approx(0.0, abs=1e-12)
        assert gm.validate_state(product).valid

    def test_partial_transpose(self):
        """
        Test that the partial transpose is an involution and keeps the trace.
        """
        rho = gm.conjugate(
            gm.pure_state([1.0, 0.5, 0.2j, 1.0]), gm.random_local_unitary(3)
        )
        twice = gm.partial_transpose(gm.partial_transpose(rho, 2), 2)
        assert np.allclose(twice.entries, rho.entries)
        assert gm.partial_transpose(rho, 1).trace == pytest.approx(1.0)
        with pytest.raises(ValueError):
            gm.partial_transpose(rho, 3)

    def test_invalid_matrices(self):
        """
        Test that non-Hermitian matrices are reported and rejected.
        """
        entries = np.eye(4, dtype=complex) / 4.0
        entries[0, 1] = 0.1
        diagnostics = gm.validate_state(gm.DensityMatrix4(entries))
        assert not diagnostics.valid
        with pytest.raises(ValueError):
            gm.negativity(gm.DensityMatrix4(entries))
        with pytest.raises(ValueError):
            gm.DensityMatrix4(np.eye(3))

    def test_local_unitary_invariance(self):
        """
        Test that seeded local unitaries leave the negativity unchanged.
        """
        rho = gm.pure_state([1.0, 0.3, 0.3j, -0.7])
        reference = gm.negativity(rho)
        generator = np.random.default_rng(11)
        for _ in range(100):
            rotated = gm.conjugate(rho, gm.random_local_unitary(generator))
            assert gm.negativity(rotated) == pytest.approx(reference, abs=1e-10)

    def test_bell_transpose_spectrum(self):
        """
        Test the partial-transpose spectrum {1/2, 1/2, 1/2, -1/2} of a Bell state.
        """
        bell = gm.pure_state([1.0, 0.0, 0.0, 1.0])
        for subsystem in (1, 2):
            spectrum = gm.partial_transpose(bell, subsystem).eigenvalues()
            assert spectrum == pytest.approx([-0.5, 0.5, 0.5, 0.5], abs=1e-12)

    def test_separable_mixtures(self):
        """
        Test that seeded product states and their mixtures have no negativity.
        """
        generator = np.random.default_rng(5)

        def _qubit():
            return generator.normal(size=2) + 1j * generator.normal(size=2)

        products = [gm.pure_state(np.kron(_qubit(), _qubit())) for _ in range(10)]
        for rho in products:
            assert gm.negativity(rho) == pytest.approx(0.0, abs=1e-12)
        for _ in range(100):
            weights = generator.dirichlet(np.ones(len(products)))
            mixture = gm.DensityMatrix4(
                sum(w * rho.entries for w, rho in zip(weights, products))
            )
            assert gm.negativity(mixture) == pytest.approx(0.0, abs=1e-12)

    def test_leading_order_negativity(self):
        """
        Test the first-order negativity of a small classical phase against (πG/2)|κ|.
        """
        table = gm.phase_table_from_deltas(
            {"L1L2": 3.0, "L1R2": 1.0, "R1L2": 0.5, "R1R2": 2.0}, 1e-5
        )
        rho0 = gm.initial_state()
        increment = gm.DensityMatrix4(
            gm.classical_final_state(table).entries - rho0.entries
        )
        assert gm.leading_order_negativity(rho0, increment) == pytest.approx(
            gm.classical_negativity(table, exact=False), rel=1e-2
        )


class TestClassical:
    """
    TESTS FOR THE QUANTUM-CONTROLLED CLASSICAL MODEL
    """

    def test_final_state(self):
        """
        Test the classical state for a table with phase π on LL and RR.
        """
        table = gm.phase_table_from_deltas(
            {"L1L2": 0.5, "L1R2": 0.0, "R1L2": 0.0, "R1R2": 0.5}, 1.0
        )
        rho = gm.classical_final_state(table)
        psi = 0.5 * np.array([-1.0, 1.0, 1.0, -1.0])
        assert np.allclose(rho.entries, np.outer(psi, psi))
        assert rho.purity == pytest.approx(1.0, abs=1e-12)

    def test_maximal_negativity(self):
        """
        Test that πGκ = π/2 gives the maximal negativity 1/2.
        """
        table = gm.phase_table_from_deltas(
            {"L1L2": 0.5, "L1R2": 0.0, "R1L2": 0.0, "R1R2": 0.0}, 1.0
        )
        assert gm.classical_negativity(table) == pytest.approx(0.5)
        assert gm.negativity(gm.classical_final_state(table)) == pytest.approx(
            0.5, abs=1e-12
        )

    def test_constant_shift(self):
        """
        Test that adding a constant to every Δ changes nothing physical.
        """
        delta = {"L1L2": 0.3, "L1R2": 0.1, "R1L2": 0.7, "R1R2": 0.2}
        shifted = {k: v + 5.0 for k, v in delta.items()}
        a = gm.phase_table_from_deltas(delta, 0.1)
        b = gm.phase_table_from_deltas(shifted, 0.1)
        assert a.combination == pytest.approx(b.combination)
        assert np.allclose(
            gm.classical_final_state(a).entries, gm.classical_final_state(b).entries
        )

    def test_incomplete_table(self):
        """
        Test that a table without all four pairs is rejected.
        """
        with pytest.raises(ValueError):
            gm.PhaseTable(delta={"L1L2": 1.0, "R1R2": 1.0}, G=1.0)

    def test_leading_order_remainder(self):
        """
        Test that the gap between exact and leading negativity is cubic in G.
        """
        delta = {"L1L2": 1.0, "L1R2": 0.0, "R1L2": 0.0, "R1R2": 0.0}

        def _gap(G: float) -> float:
            table = gm.phase_table_from_deltas(delta, G)
            return abs(
                gm.classical_negativity(table, exact=False)
                - gm.classical_negativity(table)
            )

        assert _gap(0.04) / _gap(0.02) == pytest.approx(8.0, rel=0.05)
        assert _gap(0.02) / _gap(0.01) == pytest.approx(8.0, rel=0.05)

    def test_linear_in_duration(self):
        """
        Test that the leading negativity of static branches grows linearly with T.
        """
        values = {}
        for T in (10.0, 20.0, 40.0):
            config = gm.ExperimentSpec(
                m1=1.0, m2=1.0, separation=1.0, offset=1.0, duration=T
            ).build()
            table = gm.compute_phase_table(config, 1e-3)
            values[T] = gm.classical_negativity(table, exact=False)
        assert values[20.0] == pytest.approx(2.0 * values[10.0], rel=1e-7)
        assert values[40.0] == pytest.approx(4.0 * values[10.0], rel=1e-7)

    def test_static_phase_table(self):
        """
        Test the computed table and the Hamiltonian route against the closed form.
        """
        config = gm.ExperimentSpec(
            m1=1.0, m2=1.0, separation=1.0, offset=1.0, duration=10.0
        ).build()
        table = gm.compute_phase_table(config, 1e-3)
        routed = gm.hamiltonian_deltas(config, 1e-3)
        for label, w1, w2 in config.pairs():
            expected = gm.static_delta(1.0, 1.0, 10.0, gm.hull_distance(w1, w2))
            assert table.delta[label] == pytest.approx(expected, rel=1e-9)
            assert routed[label] == pytest.approx(expected, rel=1e-6)
        assert table.combination == pytest.approx(-10.0 / (6.0 * math.pi), rel=1e-9)


class TestQuantum:
    """
    TESTS FOR THE LEADING-ORDER QUANTUM MODEL
    """

    def test_initial_state(self):
        """
        Test that the initial product state is pure and unentangled.
        """
        rho0 = gm.initial_state()
        assert rho0.trace == pytest.approx(1.0)
        assert rho0.purity == pytest.approx(1.0)
        assert gm.negativity(rho0) == pytest.approx(0.0, abs=1e-12)

    def test_increments(self):
        """
        Test that the increments are traceless and Hermitian with the expected pattern.
        """
        state = gm.assemble_perturbed_state(_handmade_functionals(), 1e-3)
        for name in ("d_rho_c", "d_rho_l", "d_rho_q"):
            diagnostics = gm.validate_state(getattr(state, name), "increment")
            assert diagnostics.valid
        q = state.d_rho_q.entries
        assert q[0, 3] == pytest.approx(-q[1, 2])
        assert q[0, 0] == 0.0
        assert state.kappa == pytest.approx(3.5)
        assert state.hadamard_combination == pytest.approx(-0.4)

    def test_negativity_closed_form(self):
        """
        Test the first-order negativity against πG max(0, |G combination| - 2 L).
        """
        G = 1e-3
        state = gm.assemble_perturbed_state(_handmade_functionals(), G)
        expected = math.pi * G * (0.5 * math.hypot(3.5, 0.4) - 0.1)
        assert gm.quantum_negativity(state) == pytest.approx(expected, rel=1e-9)
        assert gm.quantum_negativity(state, 1) == pytest.approx(expected, rel=1e-9)
        assert gm.effective_noise(state) == pytest.approx(0.1, rel=1e-6)
        assert gm.second_order_bound(state) == pytest.approx((math.pi * G * 3.0) ** 2)

        # Noise this weak against the Hadamard term breaks positivity at first order
        lowest = gm.validate_state(state.total, "full").min_eigenvalue
        assert lowest < -gm.positivity_coefficient(state) * G**2

        # Without noise the propagator combination alone sets the negativity
        quiet = gm.assemble_perturbed_state(
            _handmade_functionals(), G, include_noise=False
        )
        combination = _handmade_functionals().feynman_combination
        assert gm.quantum_negativity(quiet) == pytest.approx(
            math.pi * G * abs(combination), rel=1e-9
        )

    def test_noise_clamp(self):
        """
        Test that overwhelming local noise clamps the negativity at zero.
        """
        functionals = _handmade_functionals().model_copy(
            update={
                "noise": gm.NoiseTerms(
                    cutoff=0.01, l_v_1=5.0, l_i_1=1.0, l_v_2=5.0, l_i_2=1.0
                )
            }
        )
        state = gm.assemble_perturbed_state(functionals, 1e-3)
        assert gm.quantum_negativity(state) == 0.0
        assert gm.effective_noise(state) == pytest.approx(8.0, rel=1e-6)

    def test_static_corrections(self):
        """
        Test the perturbed state of a computed static configuration.
        """
        config = gm.ExperimentSpec(
            m1=1.0, m2=1.0, separation=1.0, offset=1.0, duration=10.0
        ).build()
        state = gm.perturbative_corrections(config, 1e-3)
        H = {d: gm.static_hadamard(1.0, 1.0, 10.0, d) for d in (1.0, 2.0, 3.0)}
        assert state.kappa == pytest.approx(-10.0 / (6.0 * math.pi), rel=1e-6)
        assert state.hadamard_combination == pytest.approx(
            H[3.0] + H[1.0] - 2.0 * H[2.0], rel=1e-4
        )
        lead = state.feynman_magnitude - gm.effective_noise(state)
        assert gm.quantum_negativity(state) == pytest.approx(
            math.pi * 1e-3 * max(0.0, lead), rel=1e-6, abs=1e-15
        )

        # The lowest eigenvalue stays within the second-order allowance
        lowest = gm.validate_state(state.total, "full").min_eigenvalue
        assert lowest >= -gm.positivity_coefficient(state) * 1e-3**2

        # Dropping the Hadamard increment leaves its combination at zero
        classical = gm.perturbative_corrections(
            config, 1e-3, include_noise=False, include_quantum=False
        )
        assert classical.hadamard_combination == 0.0
        assert not classical.d_rho_q.entries.any()

    @pytest.mark.parametrize(
        "fields",
        [
            dict(offset=1.0, duration=10.0),
            dict(offset=0.5, duration=20.0, m1=2.0),
            dict(offset=1.0, duration=5.0, separation=2.0),
            dict(family="split", offset=0.5, duration=4.0, ramp_time=1.0),
            dict(family="split", offset=1.0, duration=8.0, ramp_time=2.0),
        ],
    )
    def test_classical_limit(self, fields):
        """
        Test that switching off the Hadamard and noise terms gives (πG/2)|κ|.
        """
        config = gm.ExperimentSpec(
            **{"m1": 1.0, "m2": 1.0, "separation": 1.0, **fields}
        ).build()
        table = gm.compute_phase_table(config, 1e-3)
        assert gm.classical_limit_switch(config, 1e-3) == pytest.approx(
            gm.classical_negativity(table, exact=False), rel=1e-10
        )

    def test_branch_symmetry(self):
        """
        Test that branches of different masses are rejected.
        """
        w = gm.make_static_worldline
        config = gm.BranchConfig(
            l1=w(1.0, (-0.5, 0, 0), 10.0),
            r1=w(2.0, (0.5, 0, 0), 10.0),
            l2=w(1.0, (1.5, 0, 0), 10.0),
            r2=w(1.0, (2.5, 0, 0), 10.0),
            duration=10.0,
        )
        with pytest.raises(gm.ConfigurationError):
            gm.check_branch_symmetry(config)


class TestScanner:
    """
    TESTS FOR SWEEPS, DOMINANCE RATIOS AND REGIMES
    """

    def test_spacelike_point(self):
        """
        Test that a window shorter than the separation has no classical entanglement.
        """
        experiment = gm.ExperimentSpec(
            m1=1.0, m2=1.0, separation=1.0, offset=1.0, duration=0.5
        )
        report = gm.evaluate_point(experiment, G=1e-3)
        assert report.status == "ok"
        assert report.regime == "spacelike"
        assert report.n_c_exact == 0.0
        assert report.n_c_leading == 0.0
        assert report.dominance_ratio == 0.0
        assert report.hadamard_r1l2 > 0.0

    def test_ratio_grows_with_window(self):
        """
        Test that the dominance ratio grows as the window doubles.
        """
        ratios = [
            gm.dominance_ratio(
                gm.ExperimentSpec(
                    m1=1.0, m2=1.0, separation=1.0, offset=1.0, duration=T
                ).build()
            ).value
            for T in (20.0, 40.0, 80.0)
        ]
        assert ratios[0] < ratios[1] < ratios[2]
        assert ratios[2] == pytest.approx(
            gm.static_dominance_ratio(
                {"L1L2": 2.0, "L1R2": 3.0, "R1L2": 1.0, "R1R2": 2.0}, 80.0
            ),
            rel=1e-3,
        )

    def test_ratio_flags(self):
        """
        Test the flags for vanishing combinations.
        """
        zero = {
            k: gm.PairFunctional(value=0.0, kind="Hadamard")
            for k in ("L1L2", "L1R2", "R1L2", "R1R2")
        }
        functionals = gm.FunctionalSet(deltas=zero, hadamards=zero)
        ratio = gm.ratio_from_functionals(functionals)
        assert ratio.flag == "undefined"
        assert math.isnan(ratio.value)
        assert gm.classify_regime(functionals, ratio) == "spacelike"

    def test_bmv_exponent(self):
        """
        Test the dominance ratio at one second of a micron-scale experiment.
        """
        config = gd.load_config("json/configs/bmv_static_si.json")
        assert config.experiment.duration == pytest.approx(2.99792458e14)
        assert config.experiment.separation == pytest.approx(1.0)
        report = gm.evaluate_point(config.experiment, config.numerics, config.G)
        assert report.status == "ok"
        assert report.method == "closed_form"
        assert report.regime == "timelike-dominated"
        assert math.floor(math.log10(report.dominance_ratio)) == 14

    def test_extrapolated_exponent(self):
        """
        Test that the linear law fitted on short windows gives the same exponent.
        """
        experiment = gm.ExperimentSpec(
            m1=1.0, m2=1.0, separation=1.0, offset=1.0, duration=10.0
        )
        result = gm.extrapolate_dominance_ratio(experiment, 2.99792458e14)
        assert result.exponent == 14
        assert result.validation_residual < 1e-2
        slope = math.pi / (6.0 * math.log(4.0 / 3.0))
        assert result.slope == pytest.approx(slope, rel=1e-2)

    def test_sweep_order(self):
        """
        Test that a 3x3 sweep returns nine rows with the last axis fastest.
        """
        config = gd.load_config("json/configs/sweep_3x3.json")
        reports = gm.run_sweep(config.sweep_spec(), config.numerics)
        assert len(reports) == 9
        assert [r.index for r in reports] == list(range(9))
        assert [(r.m1, r.duration) for r in reports] == [
            (m, T) for m in (1.0, 2.0, 3.0) for T in (5.0, 10.0, 20.0)
        ]
        assert all(r.status == "ok" for r in reports)
        assert reports[4].delta_r1l2 == pytest.approx(
            gm.static_delta(2.0, 1.0, 10.0, 1.0), rel=1e-9
        )

    def test_sweep_records_failures(self):
        """
        Test that an invalid grid point is recorded and the sweep continues.
        """
        spec = gm.SweepSpec(
            axes=[gm.SweepAxis(name="duration", values=[8.0, 3.0])],
            base=gm.ExperimentSpec(
                family="split",
                m1=1.0,
                m2=1.0,
                separation=1.0,
                offset=1.0,
                duration=8.0,
                ramp_time=2.0,
            ),
            G=1e-3,
            outputs=["classical"],
        )
        reports = gm.run_sweep(spec)
        assert [r.status for r in reports] == ["ok", "invalid"]
        assert "ramp_time" in reports[1].message
        assert reports[0].n_c_exact > 0.0

    def test_single_point_sweep(self):
        """
        Test that a one-point sweep reports what evaluate_point reports.
        """
        base = gm.ExperimentSpec(
            m1=1.0, m2=1.0, separation=1.0, offset=1.0, duration=5.0
        )
        spec = gm.SweepSpec(
            axes=[gm.SweepAxis(name="duration", values=[10.0])],
            base=base,
            G=1e-3,
            outputs=["classical"],
        )
        numerics = gm.NumericsSettings(n_jobs=1)
        (report,) = gm.run_sweep(spec, numerics)
        direct = gm.evaluate_point(
            base.model_copy(update={"duration": 10.0}), numerics, 1e-3, ["classical"]
        )
        assert report.model_dump() == direct.model_dump()

    def test_grid_cap(self):
        """
        Test that grids beyond max_grid_points are rejected.
        """
        base = gm.ExperimentSpec(
            m1=1.0, m2=1.0, separation=1.0, offset=1.0, duration=10.0
        )
        with pytest.raises(ValueError, match="max_grid_points"):
            gm.SweepSpec(
                axes=[gm.SweepAxis(name="m1", values=[1.0, 2.0, 3.0])],
                base=base,
                G=1.0,
                max_grid_points=2,
            )
        with pytest.raises(ValueError):
            gm.SweepAxis(name="separation", values=[1.0, -1.0])


class TestConfig:
    """
    TESTS FOR CONFIG DOCUMENTS
    """

    def test_minimal(self):
        """
        Test that a minimal document fills in every default.
        """
        config = gd.load_config("json/configs/minimal_static.json")
        assert config.numerics.epsrel == 1e-7
        assert config.numerics.epsilon_levels == 5
        assert config.output.format == "csv"
        assert config.units.length_scale_l0 == 1e-6
        assert config.experiment.family == "static"
        assert config.experiment.ramp_time is None

    def test_unknown_key(self):
        """
        Test that unknown keys raise ConfigParseError naming the field.
        """
        with pytest.raises(gm.ConfigParseError) as e:
            gd.load_config("json/configs/unknown_key.json")
        assert "gravity_mode" in e.value.fields

    def test_malformed(self):
        """
        Test that malformed JSON reports its position.
        """
        with pytest.raises(gm.ConfigParseError) as e:
            gd.load_config("json/configs/malformed.json")
        assert e.value.line is not None

    def test_superluminal(self):
        """
        Test that physically invalid values raise ConfigValidationError.
        """
        with pytest.raises(gm.ConfigValidationError, match="ramp_time"):
            gd.load_config("json/configs/superluminal_ramp.json")

    def test_bad_quantity(self):
        """
        Test that a quantity with the wrong dimension is rejected.
        """
        text = json.dumps(
            {
                "experiment": {
                    "m1": "1 s",
                    "m2": 1.0,
                    "separation": 1.0,
                    "offset": 1.0,
                    "duration": 1.0,
                }
            }
        )
        with pytest.raises(ValueError, match="experiment.m1"):
            gd.parse_config(text)

    def test_overrides(self):
        """
        Test that command-line overrides are applied and validated.
        """
        config = gd.load_config("json/configs/minimal_static.json")
        updated = config.with_overrides(epsrel=1e-6, seed=3, format="json")
        assert updated.numerics.epsrel == 1e-6
        assert updated.numerics.seed == 3
        assert updated.output.format == "json"
        assert config.numerics.epsrel == 1e-7


class TestReports:
    """
    TESTS FOR COMMANDS AND THEIR SERIALIZED OUTPUT
    """

    def test_single_csv(self):
        """
        Test that the single command writes provenance and one parseable row.
        """
        config = gd.load_config("json/configs/coupled_static.json")
        status, text = gd.run_command("single", config)
        assert status == 0
        assert text.startswith("# tool: ")
        rows = gd.read_csv_rows(text)
        assert len(rows) == 1
        row = rows[0]
        assert row["status"] == "ok"
        assert row["n_c_leading"] == pytest.approx(
            0.5 * math.pi * 1e-3 * 10.0 / (6.0 * math.pi), rel=1e-9
        )
        assert row["classical_limit"] == pytest.approx(row["n_c_leading"], rel=1e-10)
        assert row["l_i_1"] < row["l_v_1"]

    def test_csv_matches_json(self):
        """
        Test that CSV and JSON outputs carry the same values and are deterministic.
        """
        config = gd.load_config("json/configs/coupled_static.json")
        _, csv_text = gd.run_command("single", config)
        _, again = gd.run_command("single", config)
        assert csv_text == again
        _, json_text = gd.run_command("single", config.with_overrides(format="json"))
        document = json.loads(json_text)
        assert document["provenance"]["version"] == gd.__version__
        csv_row = gd.read_csv_rows(csv_text)[0]
        for key, value in document["rows"][0].items():
            if isinstance(value, float):
                assert csv_row[key] == value

    def test_oracle(self):
        """
        Test that the quadrature matches every closed form for static branches.
        """
        config = gd.load_config("json/configs/minimal_static.json")
        status, text = gd.run_command("oracle", config.with_overrides(format="json"))
        rows = json.loads(text)["rows"]
        assert status == 0
        assert len(rows) == 14
        assert all(row["relative_error"] <= 1e-4 for row in rows)

    def test_oracle_needs_static(self):
        """
        Test that the oracle refuses moving branches.
        """
        config = gd.load_config("json/configs/split.json")
        with pytest.raises(gm.ConfigValidationError):
            gd.run_command("oracle", config)

    def test_validate(self):
        """
        Test that every invariant check passes on a static experiment.
        """
        config = gd.load_config("json/configs/coupled_static.json")
        status, text = gd.run_command("validate", config.with_overrides(format="json"))
        rows = json.loads(text)["rows"]
        assert status == 0
        assert all(row["passed"] for row in rows)
        names = [row["check"] for row in rows]
        assert "hamiltonian_phase_route" in names
        assert "perturbed_state_positivity" in names

    def test_split_single(self):
        """
        Test the classical diagnostics of a split, hold and recombine experiment.
        """
        config = gd.load_config("json/configs/split.json")
        status, text = gd.run_command("single", config)
        row = gd.read_csv_rows(text)[0]
        assert status == 0
        assert row["n_c_exact"] > 0.0
        assert row["n_c_exact"] <= row["n_c_leading"]

    def test_unknown_command(self):
        """
        Test that unknown commands are rejected.
        """
        config = gd.load_config("json/configs/minimal_static.json")
        with pytest.raises(ValueError):
            gd.run_command("plot", config)


class TestCli:
    """
    TESTS FOR THE COMMAND-LINE INTERFACE AND ITS EXIT CODES
    """

    def test_version(self):
        """
        Test the version option.
        """
        result = CliRunner().invoke(main, ["--version"])
        assert result.exit_code == 0
        assert gd.__version__ in result.output

    def test_single(self):
        """
        Test a successful run printed to standard output.
        """
        result = CliRunner().invoke(
            main,
            [
                "--log-level",
                "ERROR",
                "--format",
                "json",
                "single",
                "--config",
                "json/configs/coupled_static.json",
            ],
        )
        assert result.exit_code == 0
        assert json.loads(result.output)["rows"][0]["status"] == "ok"

    def test_out_file(self, tmp_path):
        """
        Test that --out writes the report to a file.
        """
        path = tmp_path / "report.csv"
        result = CliRunner().invoke(
            main,
            [
                "--out",
                str(path),
                "single",
                "--config",
                "json/configs/coupled_static.json",
            ],
        )
        assert result.exit_code == 0
        assert len(gd.read_csv_rows(path.read_text())) == 1

    def test_exit_codes(self):
        """
        Test the exit codes for invalid documents and unreadable files.
        """
        runner = CliRunner()
        invalid = runner.invoke(
            main, ["single", "--config", "json/configs/unknown_key.json"]
        )
        assert invalid.exit_code == 1
        superluminal = runner.invoke(
            main, ["single", "--config", "json/configs/superluminal_ramp.json"]
        )
        assert superluminal.exit_code == 1
        missing = runner.invoke(
            main, ["single", "--config", "json/configs/does_not_exist.json"]
        )
        assert missing.exit_code == 3
