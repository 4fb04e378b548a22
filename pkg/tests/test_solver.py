"""
Tests for the greedy solver: objective, selection, projection and runs.
"""

import math
import unittest
from unittest import mock

import numpy as np

from indefinite_oga.dictionary import Neuron, SamplingMode
from indefinite_oga.errors import (
    DependentNeuronError, DictionaryExhaustedError, SingularProjectionError, SolverError
)
from indefinite_oga.linalg import solve_symmetric
from indefinite_oga.problems import (
    ProblemSpec, bilinear_form, h1_inner, preset, sample_field, source_pairing
)
from indefinite_oga.quadrature import BoxDomain, build_grid, integrate
from indefinite_oga.solver import (
    Model, SolverConfig, SolverState, admit, advance, independence, project, rank_candidates,
    residual_functional, run, select_candidate, select_neuron
)
from indefinite_oga.solver.objective import objective_with_gradient, scan_candidates, scan_direction


def unit_interval_problem(source=1.0, c=-1.0):
    """
    -u'' + c u = source on (0, 1).
    """
    return ProblemSpec(BoxDomain.unit(1), np.eye(1), c, lambda x: np.full(len(x), source))


def closed_form_pairing(omega, b):
    """
    Integral over (0, 1) of max(0, omega x + b)^2 for omega = +-1.
    """
    if omega > 0:
        lo = max(-b, 0.0)
        return ((1.0 + b) ** 3 - (lo + b) ** 3) / 3.0 if lo < 1.0 else 0.0
    hi = min(b, 1.0)
    return (b ** 3 - (b - hi) ** 3) / 3.0 if hi > 0.0 else 0.0


class TestResidualFunctional(unittest.TestCase):
    """
    Test <g, u_{n-1} - u>_H.
    """

    def setUp(self):
        self.grid = build_grid(BoxDomain.unit(1), 4, 2)
        self.cfg = SolverConfig(n_max=1, n_b=4, refine=False)

    def test_empty_model(self):
        """
        Test that only -(f, g) survives for u_0 = 0.
        """
        state = SolverState.create(unit_interval_problem(), self.grid, self.cfg)
        value = residual_functional(state, Neuron((1.0,), 0.0, 2))
        self.assertAlmostEqual(value, -1 / 3, places=14)

    def test_zero_source(self):
        """
        Test that the functional vanishes for u_0 = 0 and f = 0.
        """
        state = SolverState.create(unit_interval_problem(source=0.0), self.grid, self.cfg)
        self.assertEqual(residual_functional(state, Neuron((-1.0,), 0.7, 2)), 0.0)

    def test_one_neuron_model(self):
        """
        Test against separately integrated gradient, reaction and source terms.
        """
        problem = unit_interval_problem()
        grid = build_grid(BoxDomain.unit(1), 16, 3)
        state = SolverState.create(problem, grid, self.cfg)
        state.model.append(Neuron((1.0,), -0.25, 2))
        project(state)

        g = Neuron((-1.0,), 0.8, 2)
        u = sample_field(grid, state.model)
        v = sample_field(grid, g)
        gradient_term = integrate(grid, u.gradients[:, 0] * v.gradients[:, 0])
        reaction_term = integrate(grid, problem.reaction * u.values * v.values)
        source_term = integrate(grid, problem.source_values(grid.nodes) * v.values)
        expected = gradient_term + reaction_term - source_term
        self.assertLessEqual(abs(residual_functional(state, g) - expected), 1e-12)


class TestSelection(unittest.TestCase):
    """
    Test the argmax over candidates.
    """

    def setUp(self):
        self.problem = unit_interval_problem()
        self.grid = build_grid(BoxDomain.unit(1), 4, 2)
        self.cfg = SolverConfig(n_max=1, n_b=4, refine=False)

    def test_tie_break(self):
        """
        Test that equal magnitudes keep the lower index first.
        """
        self.assertEqual(list(rank_candidates([0.1, -0.5, 0.5])), [1, 2, 0])

    def test_scan_matches_closed_form(self):
        """
        Test all 10 candidate objectives against closed-form integrals.
        """
        state = SolverState.create(self.problem, self.grid, self.cfg)
        scores = scan_candidates(state)
        expected = [-closed_form_pairing(n.omega[0], n.b) for n in state.candidates.neurons]
        np.testing.assert_allclose(scores, expected, rtol=1e-13, atol=1e-15)

    def test_argmax_over_candidates(self):
        """
        Test that the brute-force maximizer omega = 1, b = 1 is selected.
        """
        state = SolverState.create(self.problem, self.grid, self.cfg)
        selection = select_candidate(state, self.cfg)
        self.assertEqual(selection.candidate_index, 4)
        self.assertEqual(selection.neuron, Neuron((1.0,), 1.0, 2))
        self.assertAlmostEqual(selection.grid_objective, -7 / 3, places=13)
        self.assertFalse(selection.refined)
        self.assertEqual(select_neuron(state, self.cfg), selection.neuron)

    def test_duplicate_skipped(self):
        """
        Test that a candidate already in the model is passed over for the next best.
        """
        state = SolverState.create(self.problem, self.grid, self.cfg)
        state.model.append(Neuron((1.0,), 1.0, 2))
        selection = select_candidate(state, self.cfg)
        self.assertEqual(selection.candidate_index, 3)
        self.assertEqual(selection.neuron, Neuron((1.0,), 0.5, 2))

    def test_dictionary_exhausted(self):
        """
        Test that a model holding every candidate exhausts the dictionary.
        """
        state = SolverState.create(self.problem, self.grid, self.cfg)
        for neuron in state.candidates.neurons:
            state.model.append(neuron)
        with self.assertRaises(DictionaryExhaustedError):
            select_candidate(state, self.cfg)

    def test_parallel_scan_matches_serial(self):
        """
        Test that a process pool returns the serial scores exactly.
        """
        problem = preset('example2', -1.0)
        grid = build_grid(problem.domain, 20, 2)
        state = SolverState.create(problem, grid, SolverConfig(n_max=1, n_b=30))
        serial = scan_candidates(state, num_processes=1)
        parallel = scan_candidates(state, num_processes=2)
        self.assertTrue(np.array_equal(serial, parallel))

    def test_chunked_scan_matches_direct(self):
        """
        Test that small scan chunks give the same scores as single neuron evaluation.
        """
        problem = preset('example1', -1.0)
        grid = build_grid(problem.domain, 50, 2)
        state = SolverState.create(problem, grid, SolverConfig(n_max=1, n_b=20))
        omega = state.candidates.directions[1]
        scores = scan_direction((omega, state.candidates.offsets), grid.nodes, state.flux,
                                state.reaction, 2, chunk_elements=grid.n_points * 3)
        direct = [residual_functional(state, Neuron(tuple(omega), b, 2)) for b in state.candidates.offsets]
        np.testing.assert_allclose(scores, direct, rtol=1e-12, atol=1e-14)


class TestRefinement(unittest.TestCase):
    """
    Test local refinement of the grid argmax.
    """

    def test_objective_gradient_matches_finite_differences(self):
        """
        Test dJ/db and dJ/dtheta against central differences.
        """
        problem = preset('example3', -1.0)
        grid = build_grid(problem.domain, 40, 2)
        cfg = SolverConfig(n_max=1, sampling=SamplingMode.ANGULAR, n_theta=16, n_b=20, b_range=(-2.0, 2.0))
        state = SolverState.create(problem, grid, cfg)
        state.model.append(Neuron((0.6, 0.8), -0.5, 2))
        project(state)
        theta, b, h = 0.7, -0.4, 1e-6

        def J(t, s):
            omega = np.array([math.cos(t), math.sin(t)])
            return objective_with_gradient(state, omega, s, 2)[0]

        omega = np.array([math.cos(theta), math.sin(theta)])
        perp = np.array([-math.sin(theta), math.cos(theta)])
        _, gradient = objective_with_gradient(state, omega, b, 2, omega_perp=perp)
        fd_theta = (J(theta + h, b) - J(theta - h, b)) / (2 * h)
        fd_b = (J(theta, b + h) - J(theta, b - h)) / (2 * h)
        scale = max(1e-3, abs(fd_theta), abs(fd_b))
        self.assertLessEqual(abs(gradient[0] - fd_theta), 1e-4 * scale)
        self.assertLessEqual(abs(gradient[1] - fd_b), 1e-4 * scale)

    def test_refinement_never_worsens(self):
        """
        Test that refined objectives are at least as large as the grid maximum.
        """
        cases = [
            ('example1', -1.0, SolverConfig(n_max=12, n_b=40, b_margin=1.0), 100),
            ('example3', -1.0, SolverConfig(n_max=8, sampling='angular', n_theta=16, n_b=20,
                                            b_range=(-2.0, 2.0)), 20),
            ('example5', 2 * np.pi, SolverConfig(n_max=8, n_b=20, k=3), 20),
        ]
        for name, parameter, cfg, cells in cases:
            problem = preset(name, parameter)
            grid = build_grid(problem.domain, cells, 2)
            result = run(problem, grid, cfg)
            for record in result.history:
                self.assertGreaterEqual(abs(record.objective), abs(record.grid_objective))
            self.assertTrue(any(record.refined for record in result.history), msg=name)


class TestProjection(unittest.TestCase):
    """
    Test the Galerkin projection.
    """

    def setUp(self):
        self.problem = unit_interval_problem()
        self.grid = build_grid(BoxDomain.unit(1), 8, 3)
        self.cfg = SolverConfig(n_max=1, n_b=4, refine=False)

    def test_single_neuron(self):
        """
        Test a_1 = (f, g) / a(g, g) = 5/17 for g = x^2.
        """
        state = SolverState.create(self.problem, self.grid, self.cfg)
        g = Neuron((1.0,), 0.0, 2)
        state.model.append(g)
        project(state)
        sample = sample_field(self.grid, g)
        expected = (source_pairing(self.grid, state.source_values, sample)
                    / bilinear_form(self.grid, self.problem, sample, sample))
        self.assertAlmostEqual(state.model.coefficients[0], expected, places=14)
        self.assertAlmostEqual(state.model.coefficients[0], 5 / 17, places=13)

    def test_idempotent(self):
        """
        Test that projecting twice leaves the coefficients unchanged.
        """
        state = SolverState.create(self.problem, self.grid, self.cfg)
        state.model.append(Neuron((1.0,), 0.0, 2))
        project(state)
        state.model.append(Neuron((-1.0,), 0.5, 2))
        project(state)
        before = state.model.coefficients.copy()
        project(state)
        np.testing.assert_allclose(state.model.coefficients, before, rtol=0, atol=1e-13)

    def test_needs_a_neuron(self):
        """
        Test that projecting an empty model is rejected.
        """
        state = SolverState.create(self.problem, self.grid, self.cfg)
        with self.assertRaises(ValueError):
            project(state)

    def test_quasi_orthogonality(self):
        """
        Test that the residual is orthogonal to every selected neuron.
        """
        problem = preset('example1', -1.0)
        grid = build_grid(problem.domain, 200, 2)
        cfg = SolverConfig(n_max=16, n_b=100, b_margin=1.0)
        for cache in (True, False):
            cfg.cache_samples = cache
            state = SolverState.create(problem, grid, cfg)
            for _ in range(cfg.n_max):
                state.model.append(select_neuron(state, cfg))
                project(state)
                gram = state.gram
                scale = (np.linalg.norm(gram.matrix, np.inf) * np.linalg.norm(state.model.coefficients, np.inf)
                         + np.linalg.norm(gram.rhs, np.inf))
                for neuron in state.model.neurons:
                    self.assertLessEqual(abs(residual_functional(state, neuron)), 1e-9 * scale)

    def test_galerkin_consistency(self):
        """
        Test that the recorded rhs entries equal (f, g_j) by direct quadrature.
        """
        problem = preset('example1', -1e6)
        grid = build_grid(problem.domain, 100, 2)
        cfg = SolverConfig(n_max=6, n_b=50, b_margin=1.0)
        state = SolverState.create(problem, grid, cfg)
        for _ in range(cfg.n_max):
            state.model.append(select_neuron(state, cfg))
            project(state)
        for j, neuron in enumerate(state.model.neurons):
            direct = integrate(grid, problem.source_values(grid.nodes) * sample_field(grid, neuron).values)
            self.assertLessEqual(abs(state.gram.rhs[j] - direct), 1e-13 * max(1.0, abs(direct)))


class TestAdmission(unittest.TestCase):
    """
    Test the dependence check and the fallback to the next-ranked candidate.

    On (-1, 1) with b in [-2, 2] and n_b = 4 the ten candidates hold four
    that vanish on the domain and six whose span has dimension 4.
    """

    def setUp(self):
        self.problem = preset('example1', -1.0)
        self.grid = build_grid(self.problem.domain, 8, 2)
        self.cfg = SolverConfig(n_max=4, n_b=4, b_margin=1.0, refine=False)
        self.state = SolverState.create(self.problem, self.grid, self.cfg)

    def candidate_index(self, omega, b):
        for index, neuron in enumerate(self.state.candidates.neurons):
            if neuron.omega[0] == omega and abs(neuron.b - b) < 1e-12:
                return index
        self.fail(f"no candidate with omega={omega}, b={b}")

    def admit_quadratics(self):
        for omega, b in ((1.0, 1.0), (1.0, 2.0), (-1.0, 1.0)):
            admit(self.state, Neuron((omega,), b, 2), self.cfg)

    def test_vanishing_neuron_rejected(self):
        """
        Test that a neuron that is zero at every node is not admitted.
        """
        with self.assertRaises(DependentNeuronError):
            admit(self.state, Neuron((1.0,), -1.0, 2), self.cfg)
        self.assertEqual(self.state.model.n, 0)
        self.assertEqual(self.state.gram.n, 0)

    def test_neuron_in_span_rejected(self):
        """
        Test that a fourth quadratic polynomial is rejected and a kinked neuron is not.
        """
        self.admit_quadratics()
        ratio, _, _ = independence(self.state, sample_field(self.grid, Neuron((-1.0,), 2.0, 2)))
        self.assertLess(ratio, 1e-11)
        with self.assertRaises(DependentNeuronError):
            admit(self.state, Neuron((-1.0,), 2.0, 2), self.cfg)
        self.assertEqual(self.state.model.n, 3)

        admit(self.state, Neuron((1.0,), 0.0, 2), self.cfg)
        samples = [self.state.neuron_sample(j) for j in range(4)]
        h1_gram = np.array([[h1_inner(self.grid, u, v) for v in samples] for u in samples])
        lower = self.state.span.lower
        np.testing.assert_allclose(lower @ lower.T, h1_gram, rtol=1e-10, atol=1e-12)
        self.assertEqual(self.state.gram.n, 4)

    def test_rejected_candidate_passed_over(self):
        """
        Test that a dependent top-ranked candidate yields to the next one.
        """
        self.admit_quadratics()
        dependent = self.candidate_index(-1.0, 2.0)
        kinked = self.candidate_index(1.0, 0.0)
        scores = np.zeros(len(self.state.candidates))
        scores[dependent], scores[kinked] = 1.0, 0.5
        with mock.patch('indefinite_oga.solver.oga.scan_candidates', return_value=scores):
            selection = advance(self.state, self.cfg)
        self.assertEqual(selection.candidate_index, kinked)
        self.assertEqual(selection.rejected, 1)
        self.assertEqual(self.state.model.n, 4)

    def test_failed_projection_rolls_back(self):
        """
        Test that a singular solve leaves the state as it was before the append.
        """
        best = int(rank_candidates(scan_candidates(self.state))[0])
        calls = []

        def fail_once(system):
            calls.append(system.n)
            if len(calls) == 1:
                raise SingularProjectionError(0)
            return solve_symmetric(system)

        with mock.patch('indefinite_oga.solver.oga.solve_symmetric', side_effect=fail_once):
            selection = advance(self.state, self.cfg)
        self.assertNotEqual(selection.candidate_index, best)
        self.assertEqual(selection.rejected, 1)
        self.assertEqual(self.state.model.n, 1)
        self.assertEqual(len(self.state.model.coefficients), 1)
        self.assertEqual(self.state.gram.n, 1)
        self.assertEqual(self.state.span.n, 1)
        self.assertEqual(len(self.state.neuron_samples), 1)

    def test_run_stops_at_the_rank_of_the_dictionary(self):
        """
        Test that four steps succeed and a fifth finds no acceptable candidate.
        """
        result = run(self.problem, self.grid, self.cfg)
        self.assertEqual(result.model.n, 4)
        samples = [sample_field(self.grid, neuron) for neuron in result.model.neurons]
        h1_gram = np.array([[h1_inner(self.grid, u, v) for v in samples] for u in samples])
        self.assertEqual(np.linalg.matrix_rank(h1_gram), 4)

        cfg = SolverConfig(n_max=5, n_b=4, b_margin=1.0, refine=False)
        with self.assertRaises(SolverError) as context:
            run(self.problem, self.grid, cfg)
        self.assertEqual(context.exception.iteration, 5)
        self.assertIsInstance(context.exception.__cause__, DictionaryExhaustedError)


class TestRun(unittest.TestCase):
    """
    Test complete greedy runs.
    """

    def setUp(self):
        self.problem = preset('example1', -1.0)
        self.grid = build_grid(self.problem.domain, 200, 2)

    def test_zero_steps(self):
        """
        Test that n_max = 0 reports the norms of the exact solution.
        """
        result = run(self.problem, self.grid, SolverConfig(n_max=0))
        self.assertEqual(len(result.checkpoints), 1)
        point = result.checkpoints[0]
        self.assertEqual(point.n, 0)
        self.assertEqual(len(point.model), 0)
        self.assertAlmostEqual(point.l2_error, 1.0, places=7)
        self.assertAlmostEqual(point.h1_error, math.sqrt(1 + math.pi ** 2), places=6)

    def test_checkpoints_and_history(self):
        """
        Test checkpoint placement, decreasing errors and append-only neurons.
        """
        cfg = SolverConfig(n_max=16, checkpoints=(4, 8, 16), n_b=100, b_margin=1.0)
        result = run(self.problem, self.grid, cfg)
        self.assertEqual([p.n for p in result.checkpoints], [4, 8, 16])
        self.assertEqual(len(result.history), 16)
        self.assertLess(result.checkpoints[-1].l2_error, result.checkpoints[0].l2_error)
        for point in result.checkpoints:
            self.assertEqual(point.model.neurons, result.model.neurons[:point.n])
            self.assertIsNotNone(point.energy_error)
        for record in result.history:
            self.assertLessEqual(record.orthogonality_defect, 1e-9)

    def test_deterministic(self):
        """
        Test that repeated runs produce identical errors and neurons.
        """
        cfg = SolverConfig(n_max=8, checkpoints=(4, 8), n_b=50, b_margin=1.0)
        first = run(self.problem, self.grid, cfg)
        second = run(self.problem, self.grid, cfg)
        self.assertEqual([p.l2_error for p in first.checkpoints], [p.l2_error for p in second.checkpoints])
        self.assertEqual(first.model.neurons, second.model.neurons)
        self.assertTrue(np.array_equal(first.model.coefficients, second.model.coefficients))

    def test_exhausted_step_reports_iteration(self):
        """
        Test that a step with no acceptable candidate is wrapped with its iteration index.
        """
        # Two of the four candidates vanish on (0, 1) and are rejected at the third step
        cfg = SolverConfig(n_max=5, n_b=1, refine=False)
        with self.assertRaises(SolverError) as context:
            run(unit_interval_problem(), build_grid(BoxDomain.unit(1), 4, 2), cfg)
        self.assertEqual(context.exception.iteration, 3)
        self.assertIsInstance(context.exception.__cause__, DictionaryExhaustedError)

    def test_long_run_keeps_converging(self):
        """
        Test that 64 steps with kinks outside the domain in the dictionary complete.
        """
        grid = build_grid(self.problem.domain, 400, 2)
        cfg = SolverConfig(n_max=64, checkpoints=(16, 32, 64), n_b=200, b_margin=1.0)
        result = run(self.problem, grid, cfg)
        self.assertEqual(result.model.n, 64)
        errors = [p.l2_error for p in result.checkpoints]
        self.assertLess(errors[-1], errors[0])
        self.assertLess(errors[-1], 1e-3)
        for record in result.history:
            self.assertTrue(np.isfinite(record.condition))

    def test_model_round_trip(self):
        """
        Test that an exported model evaluates identically after reloading.
        """
        result = run(self.problem, self.grid, SolverConfig(n_max=4, n_b=20, b_margin=1.0))
        restored = Model.from_dict(result.model.to_dict())
        np.testing.assert_array_equal(restored.value(self.grid.nodes), result.model.value(self.grid.nodes))


if __name__ == '__main__':
    unittest.main()
