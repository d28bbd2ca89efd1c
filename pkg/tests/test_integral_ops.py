import numpy as np
import pytest
from scipy import integrate

from illposed import (FunctionKind, FunctionRep, Interval,
                      InvalidArgumentError, OperatorKind, UnsupportedKindError,
                      bilinear_form, fourier_image_energy, gram_matrix,
                      kernel_value, laplace_forward, make_grid, matrix_to_csv,
                      parse_operator, quadratic_form)

AB = Interval(1.0, 2.0)
SYM = Interval(-1.0, 1.0)

# 2-D adaptive quadrature oracle for <T*T 1, 1> on [1,2]^2 (= 10 ln 2 - 6 ln 3)
DBLQUAD_ONE_OVER_TPS = 0.3397980735907949


def one_on(domain):
    return FunctionRep(FunctionKind.LEGENDRE_SERIES, [np.sqrt(domain.length)], domain)


def test_kind_validation():
    with pytest.raises(InvalidArgumentError):
        OperatorKind.hilbert_truncated(Interval(0.0, 1.5), Interval(1.0, 2.0))
    with pytest.raises(InvalidArgumentError):
        OperatorKind.laplace_tt(Interval(-1.0, 2.0))
    with pytest.raises(InvalidArgumentError):
        OperatorKind(tag="fourier", source=Interval(-2.0, 2.0))
    OperatorKind.fourier_tt()


def test_parse_operator_strings():
    k = parse_operator("hilbert:I=0,1:J=2,3")
    assert k.source == Interval(0.0, 1.0) and k.target == Interval(2.0, 3.0)
    assert parse_operator("laplace:a=1,b=2").source == AB
    assert parse_operator("laplace-adjoint:a=1,b=2").half.s_max == 40.0
    assert parse_operator("fourier").tag == "fourier"
    with pytest.raises(InvalidArgumentError):
        parse_operator("banana:x=1")
    with pytest.raises(InvalidArgumentError):
        parse_operator("laplace:a=x")


def test_kernel_values():
    assert kernel_value(OperatorKind.fourier_tt(), 0.3, 0.3) == pytest.approx(2.0)
    assert kernel_value(OperatorKind.laplace_tt(AB), 1.0, 1.0) == pytest.approx(0.5)
    adj = OperatorKind.laplace_adjoint_tt(AB)
    # Taylor limit of (e^{-au} - e^{-bu})/u at u = 0 is b - a
    assert kernel_value(adj, 0.0, 0.0) == pytest.approx(1.0)
    # the Taylor branch must agree with the direct formula at the same point
    u = 0.999e-3
    direct = (np.exp(-1.0 * u) - np.exp(-2.0 * u)) / u
    assert kernel_value(adj, 0.0, u) == pytest.approx(direct, rel=1e-9)
    with pytest.raises(UnsupportedKindError):
        kernel_value(OperatorKind.hilbert_truncated(Interval(0, 1), Interval(2, 3)), 0.5, 2.5)


def test_laplace_forward():
    zero = FunctionRep(FunctionKind.SINE_SERIES, [0.0], AB)
    assert laplace_forward(zero, AB, [0.0, 1.0, 2.0]) == pytest.approx([0.0, 0.0, 0.0])
    one = one_on(AB)
    out = laplace_forward(one, AB, [0.0, 1.0])
    assert out[0] == pytest.approx(1.0, rel=1e-14)  # weights sum to length
    assert out[1] == pytest.approx(np.exp(-1.0) - np.exp(-2.0), rel=1e-12)
    with pytest.raises(InvalidArgumentError):
        laplace_forward(one, AB, [-0.5])


def test_gram_matrix_fourier_diagonal():
    grid = make_grid(SYM, 32)
    M = gram_matrix(OperatorKind.fourier_tt(), grid)
    assert np.diag(M.entries) == pytest.approx(2.0 * grid.weights, rel=1e-14)


def test_gram_matrix_laplace_quadratic_form_oracle():
    grid = make_grid(AB, 64)
    M = gram_matrix(OperatorKind.laplace_tt(AB), grid)
    got = quadratic_form(M, one_on(AB))
    # independent oracle: adaptive 2-D quadrature (recomputed here)
    val, err = integrate.dblquad(lambda s, t: 1.0 / (t + s), 1, 2, 1, 2,
                                 epsabs=1e-12, epsrel=1e-12)
    assert val == pytest.approx(DBLQUAD_ONE_OVER_TPS, abs=1e-12)
    assert got == pytest.approx(DBLQUAD_ONE_OVER_TPS, abs=1e-8)


def test_gram_matrices_are_symmetric_psd():
    for kind, grid in [
        (OperatorKind.laplace_tt(AB), make_grid(AB, 48)),
        (OperatorKind.fourier_tt(), make_grid(SYM, 48)),
        (OperatorKind.hilbert_truncated(Interval(0, 1), Interval(2, 3)),
         make_grid(Interval(0.0, 1.0), 48)),
    ]:
        M = gram_matrix(kind, grid).entries
        assert np.max(np.abs(M - M.T)) <= 1e-13 * np.max(np.abs(M))
        w = np.linalg.eigvalsh(M)
        assert w[0] >= -1e-10 * w[-1]


def test_zero_function_maps_to_zero():
    grid = make_grid(AB, 32)
    M = gram_matrix(OperatorKind.laplace_tt(AB), grid)
    zero = FunctionRep(FunctionKind.SINE_SERIES, [0.0], AB)
    assert quadratic_form(M, zero) == 0.0


def test_grid_domain_mismatch():
    with pytest.raises(InvalidArgumentError):
        gram_matrix(OperatorKind.laplace_tt(AB), make_grid(Interval(0.0, 1.0), 16))


def test_self_adjoint_bilinearity(laplace_M, ab):
    rng = np.random.Generator(np.random.PCG64(7))
    for _ in range(10):
        cf, cg = rng.standard_normal(6), rng.standard_normal(6)
        f = FunctionRep(FunctionKind.SINE_SERIES, cf, ab)
        g = FunctionRep(FunctionKind.SINE_SERIES, cg, ab)
        fg = FunctionRep(FunctionKind.SINE_SERIES, cf + cg, ab)
        lhs = quadratic_form(laplace_M, fg) - quadratic_form(laplace_M, f) \
            - quadratic_form(laplace_M, g)
        rhs = 2.0 * bilinear_form(laplace_M, f, g)
        assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-13)


def test_grid_refinement_stability(ab):
    f = FunctionRep(FunctionKind.SINE_SERIES, [0.4, -0.8, 0.2], ab)
    vals = []
    for n in (128, 256):
        M = gram_matrix(OperatorKind.laplace_tt(ab), make_grid(ab, n))
        vals.append(quadratic_form(M, f))
    assert abs(vals[0] - vals[1]) <= 1e-8 * abs(vals[1])


def test_fourier_form_matches_direct_transform(fourier_M):
    f = FunctionRep(FunctionKind.SINE_SERIES, [0.7, -0.2, 0.05], SYM)
    form = quadratic_form(fourier_M, f)
    direct = fourier_image_energy(f)
    assert form == pytest.approx(direct, rel=1e-6)


def test_fourier_image_energy_samples_path(fourier_M):
    from illposed.functions import cheb_nodes
    nodes = cheb_nodes(65, SYM)
    f = FunctionRep(FunctionKind.GRID_SAMPLES, np.exp(-nodes ** 2), SYM)
    direct = fourier_image_energy(f)
    form = quadratic_form(fourier_M, f)
    assert form == pytest.approx(direct, rel=1e-6)


def test_matrix_csv_export():
    grid = make_grid(AB, 4)
    M = gram_matrix(OperatorKind.laplace_tt(AB), grid)
    text = matrix_to_csv(M)
    lines = text.strip().split("\n")
    assert lines[0] == "# operator=laplace:a=1,b=2 n=4"
    assert len(lines) == 5 and len(lines[1].split(",")) == 4
