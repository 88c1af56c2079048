import math
from fractions import Fraction

import numpy as np
import pytest

from weightlab.asymfit import fit_exponent
from weightlab.errors import OutOfRange, OutOfWindow
from weightlab.hyp import Hyp2F1Params, hyp2f1, hyp2f1_derivative
from weightlab.kernels import fe_diag_sequence
from weightlab.modules import ModuleSpec
from weightlab.spectrum import (
    CSCandidate,
    SpectrumReport,
    complementary_window,
    cs_membership,
    cs_submodules,
    diag_recurrence_sequence,
    diagonal_xis,
    fe_diag_sequence_exact,
    full_spectrum,
    generator_coefficients,
    generator_residual,
    hw_coefficients,
    hw_log_weighted_terms,
    hw_submodules,
    lw_submodules,
    principal_tail_exponent,
    series_coefficients,
    smooth_membership,
    variable_change_factors,
    xi_grid_scan,
)
from weightlab.tensor import TensorSpec, TensorState, act_tensor

SP_LW = TensorSpec(ModuleSpec(0, -0.3), ModuleSpec(-0.4, 0))          # one CS entry
SP_HW = TensorSpec(ModuleSpec(0, -0.2), ModuleSpec(-1.5, 0))          # one HW entry
SP_LWE = TensorSpec(ModuleSpec(0, -1.5), ModuleSpec(-0.2, 0))         # one LW entry
SP_CPL = TensorSpec(ModuleSpec(-0.5, -0.25), ModuleSpec(-0.2, 0))     # CS, first window
SP_CPL2 = TensorSpec(ModuleSpec(-0.9, -0.8), ModuleSpec(-0.2, 0))     # CS, second window
SP_PRIN = TensorSpec(ModuleSpec(-0.5 + 1j, -0.5 + 1j), ModuleSpec(-0.2, 0))


class TestHwCoefficients:
    def test_case_a_coefficient_asymptotics(self):
        # |u_l| ~ l^(n0 - 1 - a2), so the squared modulus carries twice that
        # exponent; the load-bearing product |u_l|^2 ||z||^2 ~ l^(a+a1-a2+2n0)
        spec, n0 = SP_HW, 0
        u = hw_coefficients(spec, n0, 2001)
        ns = np.arange(200, 2001)
        got = fit_exponent(ns, 2 * np.log(np.abs(u[200:])))
        want = 2 * (n0 - 1 - spec.a2)
        assert abs(got - want) < 0.05
        terms = hw_log_weighted_terms(spec, n0, 2001)
        got2 = fit_exponent(ns, terms[200:])
        assert abs(got2 - (spec.a + spec.a1 - spec.a2 + 2 * n0)) < 0.05

    def test_weighted_terms_match_direct(self):
        from weightlab.tensor import tensor_norm_sq
        for spec in (SP_HW, TensorSpec(ModuleSpec(0, -2), ModuleSpec(-3, 0))):
            u = hw_coefficients(spec, 1, 8)
            terms = hw_log_weighted_terms(spec, 1, 8)
            for j in range(1, 8):
                direct = abs(u[j]) ** 2 * float(tensor_norm_sq(spec, j + 1, j))
                assert abs(terms[j] - math.log(direct)) < 1e-9

    def test_telescoping_boundary_term(self):
        # E applied to the truncated series leaves only the top boundary term
        spec = TensorSpec(ModuleSpec(0, Fraction(-3, 2)), ModuleSpec(Fraction(-1, 5), 0))
        L = 14
        u = hw_coefficients(spec, 2, L, exact=True)
        st = TensorState(spec, {(j + 2, j): u[j] for j in range(L)})
        leftover = act_tensor("E", st)
        assert set(leftover.coeffs) == {(L + 2, L - 1)}

    def test_no_solution_below_bounded_left(self):
        spec = TensorSpec(ModuleSpec(0, Fraction(-3, 2)), ModuleSpec(Fraction(-1, 5), 0))
        assert all(c == 0 for c in hw_coefficients(spec, -2, 6, exact=True))

    def test_unbounded_left_allows_negative_weight_index(self):
        u = hw_coefficients(SP_CPL, -3, 6)
        assert u[0] == 1 and np.all(u != 0)

    def test_closed_product_form(self):
        # u_l = (-1)^l prod_{j<=l} A(j + n0 - 1) / prod_{j<=l} B(j) with A, B
        # the raising/lowering pieces of E on the weight space
        spec, n0 = TensorSpec(ModuleSpec(0, Fraction(-3, 10)),
                              ModuleSpec(Fraction(-2, 5), 0)), 2
        u = hw_coefficients(spec, n0, 10, exact=True)
        for l in range(10):
            num = Fraction(1)
            den = Fraction(1)
            for j in range(1, l + 1):
                num *= spec.a2 - (j + n0 - 1)   # case A up-coefficient
                den *= j                        # case A down-coefficient
            assert u[l] == (-1) ** l * num / den


class TestLwCoefficients:
    def test_weighted_tail_exponent(self):
        # |u_l|^2 ||z(l + n0, l)||^2 ~ l^(a2 - a - 2 n0)
        from weightlab.spectrum import lw_log_weighted_terms
        spec = SP_LWE
        for n0 in (0, -1):
            terms = lw_log_weighted_terms(spec, n0, 2001)
            ns = np.arange(200, 2000)
            got = fit_exponent(ns, terms[200:2000])
            assert abs(got - (spec.a2 - spec.a - 2 * n0)) < 0.05, n0


class TestHwSubmodules:
    def test_window_empty(self):
        # -1 - a + a2 = -1 + 0.2 - 1.5 = -2.3 < 0: nothing
        spec = TensorSpec(ModuleSpec(0, -1.5), ModuleSpec(-0.2, 0))
        entries, lattice = hw_submodules(spec)
        assert entries == [] and lattice is None

    def test_single_entry(self):
        # -1 - a + a2 = 0.3: only n0 = 0, module N(a - a2, 0) = N(-1.3, 0)
        entries, lattice = hw_submodules(SP_HW)
        assert lattice is None and len(entries) == 1
        e = entries[0]
        assert e.kind == "HighestWeight" and e.n0 == 0
        assert abs(e.b1 - (-1.3)) < 1e-12 and e.b2 == 0

    def test_principal_lattice(self):
        # 2 n0 < 2x - a = -0.8: infinitely many, reported as a lattice
        entries, lattice = hw_submodules(SP_PRIN)
        assert entries == []
        assert lattice is not None and lattice.n0_max == -1
        assert abs(lattice.weight_base - (-0.2)) < 1e-12  # -1 - 2x + a

    def test_complementary_lattice(self):
        entries, lattice = hw_submodules(SP_CPL)
        # threshold (-1 - a - a1 + a2)/2 = (-1 + 0.2 + 0.5 - 0.25)/2 = -0.275
        assert lattice is not None and lattice.n0_max == -1


class TestLwSubmodules:
    def test_single_entry(self):
        # window 1 + a2 - a = -0.3 < 2 n0 <= 0: n0 = 0 -> N(0, a2 - a) = N(0, -1.3)
        entries = lw_submodules(SP_LWE)
        assert len(entries) == 1
        e = entries[0]
        assert e.kind == "LowestWeight" and e.n0 == 0
        assert e.b1 == 0 and abs(e.b2 - (-1.3)) < 1e-12

    def test_left_factor_with_a1_nonzero_has_none(self):
        assert lw_submodules(SP_CPL) == []
        assert lw_submodules(SP_PRIN) == []

    def test_window_empty(self):
        # 1 + a2 - a = 2.3 > 0: window (2.3, 0] is empty
        assert lw_submodules(SP_HW) == []


class TestCsMembership:
    def test_bergman_member(self):
        xi = SP_CPL.a2 * (1 + SP_CPL.a + SP_CPL.a1)  # mu = 0, r = 0
        res = cs_membership(CSCandidate(SP_CPL, xi))
        assert res.member and res.tag == "bergman-r0"

    def test_terminating_not_member(self):
        # choose xi so that r = a (r - a = 0 non-positive integer)
        spec = SP_CPL
        s = float(spec.s)
        disc = ((1 + s) / 2 - spec.a) ** 2
        assert 0 < disc < 0.25
        xi = disc - ((1 + s) / 2) ** 2 + spec.a2 * (1 + spec.a + spec.a1)
        res = cs_membership(CSCandidate(spec, xi))
        assert not res.member and res.tag == "terminating-2f1"

    def test_euler_member(self):
        # r = 1 + a1 + a2 (n = 0 in the Euler branch): second-window sample
        spec = SP_CPL2
        r = 1 + spec.a1 + spec.a2
        disc = ((1 + float(spec.s)) / 2 - r) ** 2
        assert 0 < disc < 0.25
        xi = disc - ((1 + float(spec.s)) / 2) ** 2 + spec.a2 * (1 + spec.a + spec.a1)
        res = cs_membership(CSCandidate(spec, xi))
        assert res.member and res.tag == "euler-a2"

    def test_principal_range_never_member(self):
        lo, _ = complementary_window(SP_CPL)
        res = cs_membership(CSCandidate(SP_CPL, lo - 0.5))
        assert not res.member and res.tag == "principal-range"

    def test_out_of_range(self):
        _, hi = complementary_window(SP_CPL)
        with pytest.raises(OutOfRange):
            cs_membership(CSCandidate(SP_CPL, hi + 0.1))

    def test_generic_not_member(self):
        lo, hi = complementary_window(SP_CPL)
        xi = (lo + hi) / 2 + 0.013  # generic interior point
        res = cs_membership(CSCandidate(SP_CPL, xi))
        assert res.tag in ("generic", "terminating-2f1")
        # at this particular sample it is the generic branch
        assert not res.member


class TestCsSubmodules:
    def test_first_window(self):
        # s = -0.95 in (-1, 0): N(a + a1, a2) = N(-0.7, -0.25)
        entries = cs_submodules(SP_CPL)
        assert len(entries) == 1
        e = entries[0]
        assert e.kind == "Complementary" and e.generator_kind == "cs-hyp"
        assert abs(e.b1 - (-0.7)) < 1e-12 and abs(e.b2 - (-0.25)) < 1e-12

    def test_second_window(self):
        # a1 + a2 - a = -1.5 in (-2, -1): N(a1, a2 - a) = N(-0.9, -0.6)
        entries = cs_submodules(SP_CPL2)
        assert len(entries) == 1
        e = entries[0]
        assert e.kind == "Complementary" and e.generator_kind == "cs-binom"
        assert abs(e.b1 - (-0.9)) < 1e-12 and abs(e.b2 - (-0.6)) < 1e-12

    def test_both_windows_miss(self):
        spec = TensorSpec(ModuleSpec(-0.5, -0.25), ModuleSpec(-0.9, 0))
        # s = -1.65 and a1 + a2 - a = 0.15: no complementary entry
        assert cs_submodules(spec) == []

    def test_windows_are_mutually_exclusive(self):
        for spec in (SP_LW, SP_HW, SP_CPL, SP_CPL2, SP_PRIN):
            assert len(cs_submodules(spec)) <= 1


class TestFullSpectrum:
    def test_lw_left_complementary_entry(self):
        report = full_spectrum(SP_LW)
        assert report.hw_lattice is None
        got = {(e.kind, round(float(e.b1), 9), round(float(e.b2), 9))
               for e in report.entries}
        assert got == {("Complementary", -0.4, -0.3)}

    def test_lw_left_hw_entry(self):
        report = full_spectrum(SP_HW)
        got = {(e.kind, round(float(e.b1), 9), round(float(e.b2), 9))
               for e in report.entries}
        assert got == {("HighestWeight", -1.3, 0)}

    def test_principal_left_lattice_only(self):
        report = full_spectrum(SP_PRIN)
        assert report.entries == []
        assert report.hw_lattice is not None and report.hw_lattice.n0_max == -1

    def test_principal_exclusion_recorded(self):
        assert any("principal" in note for note in full_spectrum(SP_LW).excluded)

    def test_json_round_trip(self):
        import json
        for spec in (SP_LW, SP_HW, SP_LWE, SP_CPL, SP_CPL2, SP_PRIN):
            report = full_spectrum(spec)
            doc = json.loads(json.dumps(report.to_dict()))
            assert SpectrumReport.from_dict(doc) == report


class TestGeneratorResidual:
    @pytest.mark.parametrize("spec", [SP_LW, SP_CPL, SP_CPL2])
    def test_interior_residual_small(self, spec):
        for desc in cs_submodules(spec):
            assert generator_residual(spec, desc, 200) < 1e-8

    def test_single_term_is_large(self):
        desc = cs_submodules(SP_LW)[0]
        assert generator_residual(SP_LW, desc, 1) > 1e-3

    def test_partial_norms_cauchy(self):
        # dyadic partial-norm differences decay like n^(e+1) with
        # e = 2 Re r - 2 - Re s = -1 - 2 sqrt(disc)
        for spec in (SP_LW, SP_CPL):
            desc = cs_submodules(spec)[0]
            cand = CSCandidate(spec, desc.xi)
            u = generator_coefficients(spec, desc, 2 ** 13)
            from weightlab.tensor import weight_space_log_norms
            logs = 2 * np.log(np.abs(u)) + weight_space_log_norms(spec, 0, 2 ** 13)
            e_want = -1 - 2 * math.sqrt(cand.discriminant)
            xs, ys = [], []
            for m in range(6, 13):
                block = logs[2 ** m: 2 ** (m + 1)]
                xs.append(math.log(2.0 ** m))
                ys.append(np.log(np.sum(np.exp(block))))
            slope = fit_exponent(np.exp(np.array(xs)), np.array(ys))
            assert abs(slope - (e_want + 1)) < 0.05, spec.tensor_case


class TestRecurrenceBridges:
    def test_variable_changes_map_onto_normal_form(self):
        # raw case-(B)/(C)/(D) solutions, multiplied by the change-of-variable
        # products, solve the case-(A) normal form; exact arithmetic, n <= 40
        samples = [
            TensorSpec(ModuleSpec(Fraction(-1, 2), Fraction(-1, 4)), ModuleSpec(-2, 0)),
            TensorSpec(ModuleSpec(0, -2), ModuleSpec(Fraction(-1, 5), 0)),
            TensorSpec(ModuleSpec(0, -2), ModuleSpec(-3, 0)),
        ]
        for spec in samples:
            for xi in (Fraction(-3, 17), Fraction(1, 9)):
                raw = diag_recurrence_sequence(spec, xi, 40, exact=True)
                fac = variable_change_factors(spec, 40, exact=True)
                normal = fe_diag_sequence_exact(spec.a1, spec.a2, spec.a, xi, 40)
                assert all(raw[n] * fac[n] == normal[n] for n in range(40)), spec.tensor_case

    def test_case_a_raw_equals_normal_form(self):
        spec = TensorSpec(ModuleSpec(Fraction(-1, 2), Fraction(-1, 4)),
                          ModuleSpec(Fraction(-1, 5), 0))
        xi = Fraction(-1, 13)
        raw = diag_recurrence_sequence(spec, xi, 30, exact=True)
        normal = fe_diag_sequence_exact(spec.a1, spec.a2, spec.a, xi, 30)
        assert raw == normal

    def test_generating_function_matches_recurrence(self):
        # coefficients of (1 - t)^r 2F1(r - a, r - a2; 1 + a1; t) reproduce the
        # normal-form solution, 10 samples, n <= 100
        rng = np.random.default_rng(42)
        checked = 0
        while checked < 10:
            a1 = -rng.uniform(0.05, 0.9)
            a2 = -rng.uniform(0.05, 0.9)
            a = -rng.uniform(0.05, 0.9)
            spec = TensorSpec(ModuleSpec(a1, a2), ModuleSpec(a, 0))
            lo, hi = complementary_window(spec)
            xi = rng.uniform(lo + 1e-3, hi - 1e-3)
            closed = series_coefficients(spec, xi, 101)
            solved = fe_diag_sequence(a1, a2, a, xi, 101)
            assert np.max(np.abs(closed - solved)) < 1e-9
            checked += 1

    def test_ode_residual(self):
        # t(1-t) S'' + (1 + a1 - (1 + a1 - s) t) S' - (p + mu/(1-t)) S = 0
        spec = SP_CPL
        s, p = float(spec.s), spec.a * spec.a2
        for xi in (-0.05, 0.05):
            mu = xi - spec.a2 * (1 + spec.a + spec.a1)
            c = series_coefficients(spec, xi, 260)
            n = np.arange(260)
            for t in np.linspace(0.03, 0.6, 20):
                S = np.sum(c * t ** n)
                S1 = np.sum(n[1:] * c[1:] * t ** (n[1:] - 1))
                S2 = np.sum(n[2:] * (n[2:] - 1) * c[2:] * t ** (n[2:] - 2))
                resid = (t * (1 - t) * S2 + (1 + spec.a1 - (1 + spec.a1 - s) * t) * S1
                         - (p + mu / (1 - t)) * S)
                scale = max(abs(S), abs(S1), abs(S2), 1.0)
                assert abs(resid) < 1e-8 * scale

    def test_indicial_exponents_of_fundamental_solutions(self):
        from weightlab.hyp import indicial_exponents
        spec = SP_CPL
        # generic xi: the forward solution picks up the dominant branch
        lo, hi = complementary_window(spec)
        xi = (lo + hi) / 2 + 0.017
        cand = CSCandidate(spec, xi)
        plus, minus = indicial_exponents(cand.s, cand.mu)
        u = fe_diag_sequence(spec.a1, spec.a2, spec.a, xi, 5000)
        got = fit_exponent(np.arange(1000, 5000), np.log(np.abs(u[1000:5000])))
        assert abs(got - plus.real) < 0.05
        # at the member the solution is the minimal branch
        desc = cs_submodules(spec)[0]
        cand_m = CSCandidate(spec, desc.xi)
        _, minus_m = indicial_exponents(cand_m.s, cand_m.mu)
        um = fe_diag_sequence(spec.a1, spec.a2, spec.a, desc.xi, 5000)
        got_m = fit_exponent(np.arange(1000, 5000), np.log(np.abs(um[1000:5000])))
        assert abs(got_m - minus_m.real) < 0.05


class TestXiGridOracle:
    @pytest.mark.parametrize("spec", [SP_LW, SP_HW, SP_CPL, SP_CPL2, SP_LWE])
    def test_detected_members_match_symbolic_predictions(self, spec):
        detected = xi_grid_scan(spec)
        expected = diagonal_xis(spec)
        assert len(detected) == len(expected), spec.tensor_case
        for d, (x, _) in zip(detected, expected):
            assert abs(d.xi - x) < 1e-3
            assert d.tail_exponent < -1  # square-summable at the member

    def test_principal_spec_with_no_members(self):
        assert xi_grid_scan(SP_PRIN) == []

    def test_principal_spec_with_echo(self):
        spec = TensorSpec(ModuleSpec(-0.5 + 1j, -0.5 + 1j), ModuleSpec(-1.2, 0))
        detected = xi_grid_scan(spec)
        expected = diagonal_xis(spec)
        assert len(expected) == 1 and expected[0][1] == "HighestWeight"
        assert len(detected) == 1 and abs(detected[0].xi - expected[0][0]) < 1e-3

    def test_integral_a_case(self):
        # tensor case B: the scan runs the normal form, whose summability is
        # equivalent through the change of variables; the n0 = 0 highest-weight
        # echo sits at xi = 0 inside this spec's window
        spec = TensorSpec(ModuleSpec(0, -0.3), ModuleSpec(-2, 0))
        expected = diagonal_xis(spec)
        assert [kind for _, kind in expected] == ["HighestWeight"]
        assert abs(expected[0][0]) < 1e-12
        detected = xi_grid_scan(spec)
        assert len(detected) == 1 and abs(detected[0].xi) < 1e-3

    def test_integral_left_case(self):
        # tensor case C: lowest-weight echo on the diagonal
        spec = TensorSpec(ModuleSpec(0, -2), ModuleSpec(-0.3, 0))
        expected = diagonal_xis(spec)
        assert [kind for _, kind in expected] == ["LowestWeight"]
        detected = xi_grid_scan(spec)
        assert len(detected) == 1 and abs(detected[0].xi - expected[0][0]) < 1e-3
        assert detected[0].tail_exponent < -1


class TestPrincipalExclusion:
    def test_tail_exponent_never_summable(self):
        lo, _ = complementary_window(SP_CPL)
        for xi in np.linspace(lo - 2.0, lo - 1e-3, 10):
            e = principal_tail_exponent(SP_CPL, float(xi))
            assert e >= -1.05

    def test_out_of_range_guard(self):
        _, hi = complementary_window(SP_CPL)
        with pytest.raises(OutOfRange):
            principal_tail_exponent(SP_CPL, hi - 0.01)


class TestSmoothVectors:
    def test_zero_order_converges_first_order_diverges(self):
        res = smooth_membership(SP_CPL, 0)
        exps = dict(res.exponents)
        assert exps[0] < -1
        assert exps[1] >= -1
        assert res.diverges_at == 1

    def test_various_relatives(self):
        for k in (1, 2, -1):
            res = smooth_membership(SP_CPL, k, max_order=1)
            assert res.diverges_at == 1

    def test_descent_route_for_bounded_left(self):
        res = smooth_membership(SP_LW, -2, max_order=1)
        assert res.diverges_at == 1

    def test_norm_ratio_against_closed_formula(self):
        # sum of |coef|^2 ||z||^2 for w(1) over w(0) must match the norm ratio
        # (1 + b1)/(0 - b2) of the abstract module N(b1, b2) = N(a + a1, a2)
        spec = TensorSpec(ModuleSpec(-0.2, -0.15), ModuleSpec(-0.15, 0))  # s = -0.5
        from weightlab.spectrum import _w_ray_coefficients
        from weightlab.tensor import weight_space_log_norms
        K = 10 ** 5
        b1, b2 = spec.a + spec.a1, spec.a2
        want = (1 + b1) / (0 - b2)
        sums = []
        for k in (0, 1):
            u = _w_ray_coefficients(spec, k, K)
            logs = weight_space_log_norms(spec, k, K)
            sums.append(np.sum(np.abs(u) ** 2 * np.exp(logs)))
        assert abs(sums[1] / sums[0] - want) < 0.05 * want

    def test_disjoint_supports(self):
        # w(0) lives on the diagonal ray, w(1) on the shifted ray: no overlap
        supp0 = {(n, n) for n in range(50)}
        supp1 = {(1 + n, n) for n in range(50)}
        assert supp0.isdisjoint(supp1)

    def test_out_of_window(self):
        with pytest.raises(OutOfWindow):
            smooth_membership(TensorSpec(ModuleSpec(0, -1.5), ModuleSpec(-0.2, 0)), 0)
        with pytest.raises(OutOfWindow):
            smooth_membership(SP_PRIN, 0)


class TestAsymSProducts:
    def test_three_displayed_exponents(self):
        # products built from S = (1-z)^r F: fitted boundary exponents are
        # Re s, 2(Re r - 1/2), and 2(Re r - 1)
        for spec, xi_off in ((SP_CPL, 0.021), (SP_CPL2, 0.013)):
            lo, hi = complementary_window(spec)
            xi = lo + 0.6 * (hi - lo) + xi_off  # generic: r != 0, no integer hits
            cand = CSCandidate(spec, xi)
            r = cand.r.real
            p = Hyp2F1Params(r - spec.a, r - spec.a2, 1 + spec.a1)
            # corrections decay like (1 - t)^(2 sqrt(disc)): fit deep into the corner
            ts = 1 - np.power(2.0, -np.arange(8, 16))
            P1, P2, P3 = [], [], []
            for t in ts:
                F = hyp2f1(p, t)
                F1 = hyp2f1_derivative(p, t)
                S1 = (1 - t) ** r * F1 - r * (1 - t) ** (r - 1) * F
                P1.append(abs((1 - t) ** (2 * r) * F * np.conj(F1 * t)))
                P2.append(abs((1 - t) ** (2 * (r - 1)) * abs(F) ** 2 * t * (1 - t)))
                P3.append(abs(S1) ** 2)
            for vals, want in ((P1, float(np.real(spec.s))),
                               (P2, 2 * (r - 0.5)),
                               (P3, 2 * (r - 1))):
                slope = fit_exponent(1 - ts, np.log(vals))
                assert abs(slope - want) < 0.05, (spec.tensor_case, want)
