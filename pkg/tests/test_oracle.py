import numpy as np
import pytest

from diracpi.approximation import approx_eigenvalues
from diracpi.errors import ResolutionError, SingularMatrixError
from diracpi.oracle import (OperatorKind, cell_averages, fourier_dirac_matrix,
                            fourier_gap_eigenvalues, free_fourier_eigenvalues,
                            projected_profile, resolvent_residual, schrodinger_fd_matrix,
                            smooth_test_function, spectral_derivative_matrix)
from diracpi.point_interaction import resolvent_kernel
from diracpi.profiles import Box, Triangle
from diracpi.spectral_core import SIGMA0

FIXTURES = {
    "2s0": 2 * SIGMA0,
    "hermitian": np.array([[1.5, 0.5 - 0.5j], [0.5 + 0.5j, 2.5]]),
    "diag(3,1)": np.diag([3.0, 1.0]),
    "complex-diag": np.array([[2.0, 0.0], [0.0, 2.0 + 0.8j]]),
    "general": np.array([[2.0, 1.0], [-0.5, 2.5 - 0.4j]]),
}
REGION = (-0.95, 0.95, -0.9, 1.1)


def test_spectral_derivative_exact_on_trig_polynomials():
    N, L = 64, 3.0
    x = -L + 2 * L / N * np.arange(N)
    D = spectral_derivative_matrix(N, L)
    for n in (1, 5, 31):
        f = np.sin(np.pi * n * x / L)
        np.testing.assert_allclose(D @ f, np.pi * n / L * np.cos(np.pi * n * x / L), atol=1e-10)
    with pytest.raises(ValueError):
        spectral_derivative_matrix(63, L)


def test_free_fourier_spectrum():
    op = fourier_dirac_matrix(np.zeros((2, 2)), 1.0, 0.5, Box(), 4.0, 64)
    assert op.kind is OperatorKind.FOURIER_DIRAC
    assert op.hermitian
    np.testing.assert_allclose(op.eigenvalues().real, free_fourier_eigenvalues(1.0, 4.0, 64), atol=1e-12)


def test_hermitian_flag_and_symmetry():
    op = fourier_dirac_matrix(FIXTURES["hermitian"], 1.0, 0.2, Box(), 6.0, 256)
    assert op.hermitian
    assert np.max(np.abs(op.matrix - op.matrix.conj().T)) < 1e-13
    assert not fourier_dirac_matrix(FIXTURES["general"], 1.0, 0.2, Box(), 6.0, 256).hermitian


def test_resolution_and_argument_errors():
    with pytest.raises(ResolutionError):
        fourier_dirac_matrix(2 * SIGMA0, 1.0, 0.2, Box(), 6.0, 128)
    with pytest.raises(ValueError):
        fourier_dirac_matrix(2 * SIGMA0, 1.0, 0.2, Box(), 6.0, 257)
    with pytest.raises(ValueError):
        fourier_dirac_matrix(2 * SIGMA0, 1.0, 0.2, Box(), 6.0, 256, sampling="points")


def test_profile_samplings_have_unit_mass():
    L, N, eps = 5.0, 512, 0.3
    h = 2 * L / N
    x = -L + h * np.arange(N)
    for prof in (Box(), Triangle()):
        assert h * np.sum(projected_profile(prof, eps, L, N)) == pytest.approx(1.0, abs=1e-12)
        assert h * np.sum(cell_averages(prof, eps, x, h)) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fourier_eigenvalue_converges_to_approximate_root(name):
    A = FIXTURES[name]
    roots = approx_eigenvalues(A, 1.0, 0.2, Box(), REGION)
    assert len(roots) == 1
    z = roots[0].z
    errs = []
    for N in (512, 1024):
        op = fourier_dirac_matrix(A, 1.0, 0.2, Box(), 10.0, N)
        ev = op.eigenvalues_near(z, 1)[0]
        errs.append(abs(ev - z))
    assert errs[1] < 1e-5
    assert np.log2(errs[0] / errs[1]) >= 2


def test_cell_sampling_also_converges():
    z = approx_eigenvalues(2 * SIGMA0, 1.0, 0.2, Box(), REGION)[0].z
    errs = [abs(fourier_dirac_matrix(2 * SIGMA0, 1.0, 0.2, Box(), 10.0, N, sampling="cell")
                .eigenvalues_near(z, 1)[0] - z) for N in (512, 1024)]
    assert errs[0] > errs[1]
    assert errs[1] < 1e-3


def test_gap_eigenvalue_filter():
    op = fourier_dirac_matrix(2 * SIGMA0, 1.0, 0.2, Box(), 10.0, 512)
    found = fourier_gap_eigenvalues(op, [0.0, 0.5j])
    assert len(found) == 1 and abs(found[0].real) < 1


def test_schrodinger_fd_eigenvalue_second_order():
    errs = []
    for N in (256, 512, 1024):
        op = schrodinger_fd_matrix(np.diag([-2.0, 0.0]), 1.0, 15.0, N)
        assert op.kind is OperatorKind.FINITE_DIFF_SCHRODINGER
        ev = op.eigenvalues_near(-0.5, 1)[0]
        assert abs(ev.imag) < 1e-10
        errs.append(abs(ev + 0.5))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(np.abs(orders - 2) < 0.2)


def test_schrodinger_fd_uncoupled_box_spectrum():
    L, m = 2.0, 1.0
    exact = np.array([(j * np.pi / (2 * L)) ** 2 / (2 * m) for j in (1, 2, 3)])
    errs = []
    for N in (128, 256):
        ev = schrodinger_fd_matrix(np.zeros((2, 2)), m, L, N).eigenvalues().real[:3]
        errs.append(np.max(np.abs(ev - exact)))
    assert errs[1] < 1e-3
    assert np.log2(errs[0] / errs[1]) > 1.8


def test_schrodinger_fd_errors():
    with pytest.raises(ValueError):
        schrodinger_fd_matrix(np.zeros((2, 2)), 1.0, 5.0, 32)
    with pytest.raises(ValueError):
        schrodinger_fd_matrix(np.zeros((2, 2)), -1.0, 5.0, 128)
    with pytest.raises(SingularMatrixError):
        schrodinger_fd_matrix(np.array([[0.0, 2.0], [-2.0, 0.0]]), 1.0, 5.0, 128)


def test_free_resolvent_residual_fourth_order():
    K = resolvent_kernel(np.zeros((2, 2)), 1.0, 0.3 + 0.8j)
    res = []
    for n in (801, 1601, 3201):
        x = np.linspace(-8, 8, n)
        res.append(resolvent_residual(K, np.zeros((2, 2)), 1.0, 0.3 + 0.8j,
                                      smooth_test_function(x), x).differential)
    assert np.log2(res[0] / res[1]) > 3.5 and np.log2(res[1] / res[2]) > 3.5


def test_residual_detects_wrong_coupling():
    A, z = 2 * SIGMA0, 1j
    x = np.linspace(-8, 8, 4001)
    psi = smooth_test_function(x)
    good = resolvent_residual(resolvent_kernel(A, 1.0, z), A, 1.0, z, psi, x)
    bad = resolvent_residual(resolvent_kernel(A + SIGMA0, 1.0, z), A, 1.0, z, psi, x)
    assert good.transmission < 1e-10 and good.differential < 1e-6
    assert bad.transmission > 1e3 * max(good.transmission, 1e-12)
    assert good.nodes_checked > 3900


def test_residual_needs_origin_on_grid():
    K = resolvent_kernel(np.zeros((2, 2)), 1.0, 1j)
    x = np.linspace(-8, 8, 400)
    with pytest.raises(ValueError):
        resolvent_residual(K, np.zeros((2, 2)), 1.0, 1j, smooth_test_function(x), x)
