"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The lines bypass pytest's output capture, so they show up in every run.
Run ``pytest tests/test_acceptance.py -v`` or execute the file.
"""

import sys
import time
import warnings

import numpy as np
import pytest

from diracpi.approximation import (approx_eigenvalues, beta_epsilon_check, hs_distance,
                                   nonexpansion_threshold, spectral_enclosure)
from diracpi.errors import DegenerateCaseError, NearTransitionWarning, NotInResolventSetError
from diracpi.nonrelativistic import (krein_identity_check, nonrel_limit_distance,
                                     schrodinger_eigenvalues)
from diracpi.oracle import (fourier_dirac_matrix, resolvent_residual, schrodinger_fd_matrix,
                            smooth_test_function)
from diracpi.point_interaction import (PointSpectrumKind as P, adjoint_coupling,
                                       classify_spectrum, eigenvalue_residual, point_spectrum,
                                       resolvent_kernel)
from diracpi.profiles import Box, Sampled, Triangle, TruncatedGaussian
from diracpi.spectral_core import SIGMA0

SEED = 20240611
TWO_S0 = 2 * SIGMA0


_capture = {}


@pytest.fixture(autouse=True)
def _uncaptured(capsys):
    _capture["capsys"] = capsys
    yield
    _capture.clear()


def _emit(line):
    with _capture["capsys"].disabled():
        print("\n" + line, flush=True)


def report(n, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {n:2d}: {detail}"
    _emit(line)
    assert ok, line


def info(n, detail):
    _emit(f"INFO criterion {n:2d}: {detail}")


def test_criterion_01_classification_table():
    t0 = time.perf_counter()
    wrong = []

    def check(A, m, expected, label):
        got = classify_spectrum(A, m).point_spectrum_kind
        if got is not expected:
            wrong.append(f"{label}: {got.value} != {expected.value}")

    table = lambda kappa, eps: np.array([[1j * kappa, 2 + eps], [-2, 0]])
    check(table(0, 0), 0, P.NON_REAL_PLANE, "k=e=0")
    for eps in (0.5, -1.0, 3.0):
        check(table(0, eps), 0, P.EMPTY, f"k=0,e={eps}")
    for kappa, eps in ((1.0, 0.5), (2.0, -0.3), (-1.5, 0.0)):
        check(table(kappa, eps), 0, P.EMPTY, f"k={kappa},e={eps}")
    # criterion text: HalfPlane(-) when eps = -kappa, HalfPlane(+) when eps = +kappa
    for kappa in (1.0, -0.7, 2.5):
        check(table(kappa, -kappa), 0, P.LOWER_HALF_PLANE, f"k={kappa},e=-k")
        check(table(kappa, kappa), 0, P.UPPER_HALF_PLANE, f"k={kappa},e=+k")
    for kappa in (0.5, 1.0, -2.0, 3j):
        check(np.array([[0, 4 * kappa], [-1 / kappa, 0]]), 1.0, P.WHOLE_GAP, f"k={kappa},d=0")
        check(np.array([[0, 4 * kappa], [-1 / kappa, 0.3]]), 1.0, P.EMPTY, f"k={kappa},d=0.3")
    dt = time.perf_counter() - t0
    if wrong:
        info(1, "library gives UpperHalfPlane for eps = -kappa (determinant -(zeta kappa + eps)/2, "
                "zeta = +1 on Im z > 0)")
    report(1, not wrong and dt < 1.0, f"{len(wrong)} mismatches {wrong[:3]}, {dt:.3f} s")


def test_criterion_02_closed_form_eigenvalue():
    t0 = time.perf_counter()
    recs = point_spectrum(TWO_S0, 1.0)
    ok = len(recs) == 1 and abs(recs[0].z) < 1e-14 and recs[0].geometric_multiplicity == 1
    res = abs(eigenvalue_residual(TWO_S0, 1.0, recs[0].z))
    eps = 0.05
    root = approx_eigenvalues(TWO_S0, 1.0, eps, Box(), (-0.9, 0.9, -1, 1))[0].z
    op = fourier_dirac_matrix(TWO_S0, 1.0, eps, Box(), 12.0, 2048)
    ev = op.eigenvalues_near(root, 1)[0]
    chain = abs(ev - root)
    dt = time.perf_counter() - t0
    info(2, f"discrete eigenvalue {ev.real:.6f}{ev.imag:+.1e}i, approximate root {root.real:.6f}, "
            f"limit 0")
    report(2, ok and res < 1e-12 and chain < 1e-3 and dt < 60,
           f"z = {recs[0].z}, multiplicity {recs[0].geometric_multiplicity}, |residual| = {res:.1e}, "
           f"Fourier vs approximate root at eps = 0.05: {chain:.1e}, {dt:.1f} s")


def test_criterion_03_double_eigenvalues():
    bad = []
    n_double = 0
    for m in (1.0, -1.0, 0.6):
        for alpha in (-8, -4, -2, -1, -0.5, 0.5, 1, 2, 4, -1 + 1j, 1 + 1j, 0.3 - 2j):
            A = np.diag([alpha, -4 / alpha])
            recs = point_spectrum(A, m)
            if not recs:
                continue
            n_double += 1
            if len(recs) != 1 or recs[0].geometric_multiplicity != 2:
                bad.append((m, alpha))
    rng = np.random.default_rng(SEED)
    n_single = 0
    fixtures = [TWO_S0, np.diag([3.0, 1.0]), np.array([[2.0, 1.0], [-0.5, 2.5 - 0.4j]])]
    fixtures += [rng.normal(size=(2, 2)) * 2 + 1j * rng.normal(size=(2, 2)) for _ in range(200)]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NearTransitionWarning)
        for A in fixtures:
            try:
                recs = point_spectrum(A, 1.0)
            except DegenerateCaseError:
                continue
            for r in recs:
                n_single += 1
                if r.geometric_multiplicity != 1:
                    bad.append(A)
    report(3, not bad and n_double > 0 and n_single > 0,
           f"{n_double} admissible diag(a, -4/a) fixtures with one double eigenvalue, "
           f"{n_single} other eigenvalues all simple, {len(bad)} violations")


def test_criterion_04_resolvent_contract():
    x = np.linspace(-8, 8, 16001)  # h = 1e-3
    psi = smooth_test_function(x)
    fixtures = [("2s0", TWO_S0, 1j),
                ("[[0,2],[2,0]]", np.array([[0.0, 2.0], [2.0, 0.0]]), -1 + 1j),
                ("[[0,2i],[-2i,0]]", np.array([[0.0, 2j], [-2j, 0.0]]), -1 + 1j)]
    worst_d, worst_t, parts = 0.0, 0.0, []
    for name, A, z in fixtures:
        rep = resolvent_residual(resolvent_kernel(A, 1.0, z), A, 1.0, z, psi, x)
        worst_d, worst_t = max(worst_d, rep.differential), max(worst_t, rep.transmission)
        parts.append(f"{name}: {rep.differential:.1e}/{rep.transmission:.1e}")
    skew = np.array([[0.0, 2.0], [-2.0, 0.0]])
    for name, A in (("[[0,2],[-2,0]]", skew), ("its adjoint", skew.conj().T)):
        try:
            resolvent_kernel(A, 1.0, -1 + 1j)
            info(4, f"{name} at -1+i: in the resolvent set")
        except NotInResolventSetError:
            info(4, f"{name} at -1+i: eigenvalue (whole gap is point spectrum), no resolvent")
    report(4, worst_d < 1e-6 and worst_t < 1e-10,
           "differential/transmission residuals " + ", ".join(parts))


def test_criterion_05_norm_resolvent_convergence():
    t0 = time.perf_counter()
    eps_list = (0.2, 0.1, 0.05, 0.025)
    d = [hs_distance(TWO_S0, 1.0, 1j, eps, Box(), grid_N=400).value for eps in eps_list]
    dt = time.perf_counter() - t0
    decreasing = all(a > b for a, b in zip(d[:-1], d[1:]))
    ratio = d[-1] / d[0]
    info(5, "halving ratios " + ", ".join(f"{a / b:.3f}" for a, b in zip(d[:-1], d[1:]))
            + " (about sqrt 2: the distance scales like sqrt(eps))")
    report(5, decreasing and ratio < 0.1 and dt < 300,
           "distances " + ", ".join(f"{v:.4f}" for v in d)
           + f"; final/first = {ratio:.3f} (needs < 0.1), {dt:.1f} s")


def test_criterion_06_approximate_eigenvalue_flow():
    zs, inside = [], True
    for eps in (0.2, 0.1, 0.05):
        roots = approx_eigenvalues(TWO_S0, 1.0, eps, Box(), (-0.9, 0.9, -1, 1))
        zs.append(roots[0].z if len(roots) == 1 else np.nan)
        inside &= all(abs(r.z.imag) <= spectral_enclosure(TWO_S0, eps, Box()) for r in roots)
    mags = np.abs(zs)
    report(6, bool(np.all(np.diff(mags) < 0)) and inside,
           "|z(eps)| = " + ", ".join(f"{v:.5f}" for v in mags) + f", enclosure satisfied: {inside}")


def test_criterion_07_non_expansion():
    A = np.array([[0.0, 2.0], [-2.0, 0.0]])
    region = (-0.5, 0.5, 0.2, 1.0)
    kind = classify_spectrum(A, 1.0).point_spectrum_kind
    thr = nonexpansion_threshold(1.0, Box(), region)
    eps_list = [e for e in (thr.threshold, 2.0, 1.0, 0.5, 0.2, 0.1, 0.05, 0.02) if e <= thr.threshold]
    counts = [len(approx_eigenvalues(A, 1.0, e, Box(), region)) for e in eps_list]
    kind_txt = "exact" if thr.exact else "lower bound"
    report(7, kind is P.WHOLE_GAP and all(c == 0 for c in counts) and len(eps_list) > 3,
           f"limit operator {kind.value}; threshold {thr.threshold:.3f} ({kind_txt}); "
           f"root counts at eps <= threshold: {counts}")


def test_criterion_08_krein_identity():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(100):
        A = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        z = complex(rng.uniform(-3, 3), rng.choice([-1, 1]) * rng.uniform(0.1, 3))
        worst = max(worst, krein_identity_check(A, 1.0, z))
    report(8, worst < 1e-12, f"max Frobenius defect over 100 random (A, z): {worst:.1e}")


def test_criterion_09_schrodinger_eigenvalue():
    A = np.diag([-2.0, 0.0])
    zs = schrodinger_eigenvalues(A, 1.0)
    errs = []
    for N in (256, 512, 1024):
        ev = schrodinger_fd_matrix(A, 1.0, 15.0, N).eigenvalues_near(-0.5, 1)[0]
        errs.append(abs(ev + 0.5))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    report(9, zs == [-0.5] and bool(np.all(np.abs(orders - 2) <= 0.3)),
           f"eigenvalues {zs}; FD errors " + ", ".join(f"{e:.2e}" for e in errs)
           + "; orders " + ", ".join(f"{o:.3f}" for o in orders))


def test_criterion_10_nonrelativistic_limit():
    t0 = time.perf_counter()
    ok, parts = True, []
    for name, A in (("diag(-2,0)", np.diag([-2.0, 0.0])), ("A=0", np.zeros((2, 2)))):
        d = [nonrel_limit_distance(A, 1.0, c, -1.0).value for c in (10.0, 20.0, 40.0)]
        ratios = [a / b for a, b in zip(d[:-1], d[1:])]
        ok &= all(1.4 <= r <= 2.6 for r in ratios)
        parts.append(f"{name}: " + ", ".join(f"{v:.5f}" for v in d)
                     + " ratios " + ", ".join(f"{r:.3f}" for r in ratios))
    dt = time.perf_counter() - t0
    report(10, ok and dt < 300, "; ".join(parts) + f"; {dt:.1f} s")


def test_criterion_11_beta_antisymmetry():
    rng = np.random.default_rng(SEED)
    profiles = [Box(), Triangle(), TruncatedGaussian(),
                Sampled(np.array([0.4, 0.7, 1.0, 1.9]), np.array([0.0, 3.0, 0.5, 0.0]))]
    ws = rng.uniform(-10, 10, 10) + 1j * rng.uniform(0, 5, 10)
    worst = max(abs(beta_epsilon_check(p, w)) for p in profiles for w in ws)
    report(11, worst < 1e-10, f"max |beta| over {len(profiles)} profiles x 10 w: {worst:.1e}")


def test_criterion_12_self_adjointness():
    rng = np.random.default_rng(SEED)
    worst_im, outside, n_eigs = 0.0, 0, 0
    for _ in range(50):
        a, d = rng.uniform(-4, 4, 2)
        b = complex(*rng.uniform(-3, 3, 2))
        A = np.array([[a, b], [np.conj(b), d]])
        m = rng.choice([1.0, -0.6, 2.0])
        for r in point_spectrum(A, m):
            n_eigs += 1
            worst_im = max(worst_im, abs(r.z.imag))
            outside += not (-abs(m) < r.z.real < abs(m))
    x = rng.uniform(-3, 3, 20)
    y = rng.uniform(-3, 3, 20)
    round_trip, worst_sym = True, 0.0
    for _ in range(50):
        A = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        round_trip &= np.array_equal(adjoint_coupling(adjoint_coupling(A)).matrix, A)
        z = complex(rng.uniform(-0.9, 0.9), rng.uniform(0.2, 2))
        K = resolvent_kernel(A, 1.0, z)(x, y)
        Ks = resolvent_kernel(adjoint_coupling(A).matrix, 1.0, np.conj(z))(y, x)
        worst_sym = max(worst_sym, float(np.max(np.abs(Ks - np.conj(np.swapaxes(K, -1, -2))))))
    report(12, worst_im < 1e-10 and outside == 0 and round_trip and worst_sym < 1e-10,
           f"hermitian: {n_eigs} eigenvalues, max |Im z| {worst_im:.1e}, {outside} outside the gap; "
           f"non-hermitian: round trip {round_trip}, max adjoint defect {worst_sym:.1e}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
