#include <cmath>

#include "isospectra/errors.hpp"
#include "isospectra/families.hpp"
#include "test_util.hpp"

using namespace isospectra;
using testutil::check_coeffs;
using testutil::random_point;
using testutil::uniform;

namespace {

// Direct evaluation of the terminating series in the hypergeometric arguments
// (x, e^{i theta}, q^{-x}) rather than the family's own variable.
struct Series {
    cplx value = 0;
    double size = 0;  // sum of |term|
    void add(cplx t) {
        value += t;
        size += std::abs(t);
    }
};

Series ghyp_series(const FamilySpec& s, cplx z) {
    Series out;
    const int N = s.N;
    for (int m = 0; m <= N; ++m) {
        cplx t = pochhammer(cplx(-N), m) / std::tgamma(m + 1.0) * std::pow(z, N - m);
        for (const auto& a : s.alphas) t *= pochhammer(a, m);
        for (const auto& b : s.betas) t /= pochhammer(b, m);
        out.add(t);
    }
    return out;
}

Series gbasic_series(const FamilySpec& s, cplx z) {
    Series out;
    const cplx q = *s.q;
    const int N = s.N, sr = int(s.betas.size()) - int(s.alphas.size());
    for (int m = 0; m <= N; ++m) {
        cplx t = q_pochhammer(std::pow(q, -N), q, m) / q_pochhammer(q, q, m) * std::pow(z, m);
        for (const auto& a : s.alphas) t *= q_pochhammer(a, q, m);
        for (const auto& b : s.betas) t /= q_pochhammer(b, q, m);
        t *= std::pow(std::pow(-1.0, m) * std::pow(q, m * (m - 1) / 2.0), sr);
        out.add(t);
    }
    return out;
}

Series jacobi_series(const FamilySpec& s, cplx x) {
    Series out;
    const cplx a = s.alphas[0], b = s.alphas[1];
    const int N = s.N;
    const cplx pre = pochhammer(a + 1.0, N) / std::tgamma(N + 1.0);
    for (int k = 0; k <= N; ++k)
        out.add(pre * pochhammer(cplx(-N), k) * pochhammer(double(N) + a + b + 1.0, k) /
                (pochhammer(a + 1.0, k) * std::tgamma(k + 1.0)) * std::pow((1.0 - x) / 2.0, k));
    return out;
}

Series wilson_series(const FamilySpec& s, cplx z) {
    Series out;
    const cplx a = s.alphas[0], b = s.alphas[1], c = s.alphas[2], d = s.alphas[3];
    const cplx x = std::sqrt(z), I(0, 1);
    const int N = s.N;
    const cplx pre = pochhammer(a + b, N) * pochhammer(a + c, N) * pochhammer(a + d, N);
    for (int k = 0; k <= N; ++k)
        out.add(pre * pochhammer(cplx(-N), k) * pochhammer(double(N) + a + b + c + d - 1.0, k) *
                pochhammer(a + I * x, k) * pochhammer(a - I * x, k) /
                (std::tgamma(k + 1.0) * pochhammer(a + b, k) * pochhammer(a + c, k) * pochhammer(a + d, k)));
    return out;
}

Series racah_series(const FamilySpec& s, cplx lambda) {
    Series out;
    const cplx al = s.alphas[0], be = s.alphas[1], ga = s.alphas[2], de = s.alphas[3];
    const cplx th = (ga + de + 1.0) / 2.0;
    const cplx x = -th + std::sqrt(lambda + th * th);
    const int N = s.N;
    for (int n = 0; n <= N; ++n)
        out.add(pochhammer(cplx(-N), n) * pochhammer(double(N) + al + be + 1.0, n) * pochhammer(-x, n) *
                pochhammer(x + ga + de + 1.0, n) /
                (std::tgamma(n + 1.0) * pochhammer(al + 1.0, n) * pochhammer(be + de + 1.0, n) *
                 pochhammer(ga + 1.0, n)));
    return out;
}

Series aw_series(const FamilySpec& s, cplx x) {
    Series out;
    const cplx a = s.alphas[0], b = s.alphas[1], c = s.alphas[2], d = s.alphas[3], q = *s.q;
    const cplx e = x + std::sqrt(x - 1.0) * std::sqrt(x + 1.0);
    const int N = s.N;
    const cplx pre = q_pochhammer(a * b, q, N) * q_pochhammer(a * c, q, N) * q_pochhammer(a * d, q, N) / std::pow(a, N);
    for (int m = 0; m <= N; ++m)
        out.add(pre * std::pow(q, m) * q_pochhammer(std::pow(q, -N), q, m) *
                q_pochhammer(a * b * c * d * std::pow(q, N - 1), q, m) * q_pochhammer(a * e, q, m) *
                q_pochhammer(a / e, q, m) /
                (q_pochhammer(q, q, m) * q_pochhammer(a * b, q, m) * q_pochhammer(a * c, q, m) *
                 q_pochhammer(a * d, q, m)));
    return out;
}

Series qracah_series(const FamilySpec& s, cplx z) {
    Series out;
    const cplx al = s.alphas[0], be = s.alphas[1], ga = s.alphas[2], de = s.alphas[3], q = *s.q;
    // u = q^{-x} solves u + gamma delta q / u = z.
    const cplx u = (z + std::sqrt(z * z - 4.0 * ga * de * q)) / 2.0;
    const int N = s.N;
    for (int m = 0; m <= N; ++m)
        out.add(std::pow(q, m) * q_pochhammer(std::pow(q, -N), q, m) *
                q_pochhammer(al * be * std::pow(q, N + 1), q, m) * q_pochhammer(u, q, m) *
                q_pochhammer(ga * de * q / u, q, m) /
                (q_pochhammer(q, q, m) * q_pochhammer(al * q, q, m) * q_pochhammer(be * de * q, q, m) *
                 q_pochhammer(ga * q, q, m)));
    return out;
}

Series series(const FamilySpec& s, cplx point) {
    switch (s.family) {
        case Family::GHyp: return ghyp_series(s, point);
        case Family::GBasicHyp: return gbasic_series(s, point);
        case Family::Jacobi: return jacobi_series(s, point);
        case Family::Wilson: return wilson_series(s, point);
        case Family::Racah: return racah_series(s, point);
        case Family::AskeyWilson: return aw_series(s, point);
        case Family::QRacah: return qracah_series(s, point);
    }
    return {};
}

struct Shape {
    Family family;
    int na, nb;
};

const Shape kShapes[] = {{Family::GHyp, 1, 1},      {Family::GHyp, 2, 1},      {Family::GHyp, 2, 2},
                         {Family::GHyp, 3, 2},      {Family::GBasicHyp, 1, 1}, {Family::GBasicHyp, 2, 1},
                         {Family::GBasicHyp, 2, 2}, {Family::Jacobi, 2, 0},    {Family::Wilson, 4, 0},
                         {Family::Racah, 4, 0},     {Family::AskeyWilson, 4, 0}, {Family::QRacah, 4, 0}};

FamilySpec ghyp(int N, CVec a, CVec b) { return {Family::GHyp, N, std::move(a), std::move(b), std::nullopt}; }

}  // namespace

TEST_CASE("small polynomials") {
    check_coeffs(build_polynomial(ghyp(1, {2}, {3})).coeffs, {-2.0 / 3.0, 1}, 1e-15);
    check_coeffs(build_polynomial({Family::GBasicHyp, 1, {3}, {5}, 2.0}).coeffs, {1, -0.25}, 1e-15);
    check_coeffs(build_polynomial({Family::Wilson, 1, {0.5, 0.5, 0.5, 0.5}, {}, std::nullopt}).coeffs, {0.5, -2},
                 1e-15);
}

TEST_CASE("small zero sets") {
    CHECK(multiset_match(compute_zeros(ghyp(1, {2}, {3})).zeros, {2.0 / 3.0}) <= 1e-15);
    CHECK(multiset_match(compute_zeros({Family::GBasicHyp, 1, {3}, {5}, 2.0}).zeros, {4}) <= 1e-15);
    const double r = 1 / std::sqrt(3.0);
    CHECK(multiset_match(compute_zeros({Family::Jacobi, 2, {0, 0}, {}, std::nullopt}).zeros, {-r, r}) <= 1e-15);
}

TEST_CASE("GHyp polynomials are monic") {
    std::mt19937_64 rng(10);
    for (int d = 0; d < 20; ++d) {
        const Shape sh = kShapes[d % 4];
        const FamilySpec s = random_spec(sh.family, sh.na, sh.nb, 1 + d % 8, rng);
        CHECK(build_polynomial(s).lead() == cplx(1));
    }
}

TEST_CASE("builders agree with direct series evaluation") {
    std::mt19937_64 rng(11);
    for (const auto& sh : kShapes) {
        for (int d = 0; d < 8; ++d) {
            const FamilySpec s = random_spec(sh.family, sh.na, sh.nb, 1 + d, rng);
            const Polynomial P = build_polynomial(s);
            INFO(family_name(s.family) << " N=" << s.N);
            cplx ratio0 = 0;
            for (int k = 0; k < 6; ++k) {
                const cplx pt = random_point(rng, 0.3, 2.0);
                const Series o = series(s, pt);
                const cplx ratio = P(pt) / o.value;
                if (k == 0) ratio0 = ratio;
                // Racah is stored monic; the rest carry the series normalization.
                if (s.family != Family::Racah) CHECK(std::abs(ratio - 1.0) <= 1e-9 * o.size / std::abs(o.value));
                CHECK(std::abs(ratio - ratio0) <= 1e-9 * std::abs(ratio0) * o.size / std::abs(o.value));
            }
            for (const auto& z : compute_zeros(s).zeros) {
                const Series o = series(s, z);
                CHECK(std::abs(o.value) <= 1e-10 * o.size);
            }
        }
    }
}

TEST_CASE("defining equations hold at random samples") {
    std::mt19937_64 rng(12);
    for (const auto& sh : kShapes) {
        for (int d = 0; d < 20; ++d) {
            const FamilySpec s = random_spec(sh.family, sh.na, sh.nb, 1 + d % 8, rng);
            INFO(family_name(s.family) << " N=" << s.N);
            for (int k = 0; k < 10; ++k) {
                const cplx x = random_point(rng, 0.3, 2.0);
                try {
                    CHECK(std::abs(defining_equation_residual(s, x)) <= 1e-9);
                } catch (const SingularSample&) {
                }
            }
        }
    }
}

TEST_CASE("defining equation detects a perturbed polynomial") {
    std::mt19937_64 rng(13);
    for (const auto& sh : kShapes) {
        const FamilySpec s = random_spec(sh.family, sh.na, sh.nb, 4, rng);
        Polynomial P = build_polynomial(s);
        double cmax = 0;
        for (const auto& c : P.coeffs) cmax = std::max(cmax, std::abs(c));
        P.coeffs[1] += 1e-3 * cmax;
        double worst = 0;
        for (int k = 0; k < 10; ++k) {
            try {
                worst = std::max(worst, std::abs(defining_equation_residual(s, P, random_point(rng, 0.3, 2.0))));
            } catch (const SingularSample&) {
            }
        }
        INFO(family_name(s.family));
        CHECK(worst > 1e-6);
    }
}

TEST_CASE("GHyp operator on z - 2/3 at z = 1") {
    CHECK(std::abs(defining_equation_residual(ghyp(1, {2}, {3}), cplx(1))) <= 1e-16);
}

TEST_CASE("even in the lifted variable") {
    std::mt19937_64 rng(14);
    for (int d = 0; d < 10; ++d) {
        const FamilySpec w = random_spec(Family::Wilson, 4, 0, 1 + d % 6, rng);
        const Polynomial P = build_polynomial(w);
        const cplx x = random_point(rng, 0.3, 2.0);
        // w_2N(x) = W_N(x^2) is even; evaluate through the series in x and -x.
        const Series a = wilson_series(w, x * x), b = wilson_series(w, (-x) * (-x));
        CHECK(std::abs(P(x * x) - P((-x) * (-x))) <= 1e-10 * P.abs_eval(x * x));
        CHECK(std::abs(a.value - b.value) <= 1e-10 * a.size);

        const FamilySpec r = random_spec(Family::Racah, 4, 0, 1 + d % 6, rng);
        const cplx th = racah_theta(r), y = random_point(rng, 0.3, 2.0);
        const Polynomial R = build_polynomial(r);
        CHECK(std::abs(R(y * y - th * th) - R((-y) * (-y) - th * th)) <= 1e-10 * R.abs_eval(y * y - th * th));

        // AW: p_N((z + 1/z)/2) is invariant under z -> 1/z.
        const FamilySpec aw = random_spec(Family::AskeyWilson, 4, 0, 1 + d % 6, rng);
        const Polynomial A = build_polynomial(aw);
        const cplx z = random_point(rng, 0.3, 2.0);
        const cplx x1 = (z + 1.0 / z) / 2.0, x2 = (1.0 / z + z) / 2.0;
        CHECK(std::abs(A(x1) - A(x2)) <= 1e-10 * A.abs_eval(x1));
    }
}

TEST_CASE("computed zeros are roots") {
    std::mt19937_64 rng(15);
    for (const auto& sh : kShapes) {
        for (int d = 0; d < 8; ++d) {
            const FamilySpec s = random_spec(sh.family, sh.na, sh.nb, 1 + d, rng);
            const Polynomial P = build_polynomial(s);
            double cmax = 0;
            for (const auto& c : P.coeffs) cmax = std::max(cmax, std::abs(c));
            const ZeroSet zs = compute_zeros(s);
            CHECK(zs.zeros.size() == std::size_t(s.N));
            CHECK(zs.distinct);
            for (const auto& z : zs.zeros) CHECK(std::abs(P(z)) <= 1e-9 * std::max(cmax, P.abs_eval(z)));
        }
    }
}

TEST_CASE("lift_zero_variables") {
    ZeroSet zs;
    zs.zeros = {0.25};
    const FamilySpec w{Family::Wilson, 1, {0.5, 0.5, 0.5, 0.5}, {}, std::nullopt};
    CHECK(std::abs(lift_zero_variables(w, zs).primary[0] - 0.5) <= 1e-16);

    // theta = (gamma + delta + 1)/2 = 1.
    const FamilySpec r{Family::Racah, 1, {0.7, 0.9, 0.4, 0.6}, {}, std::nullopt};
    CHECK(racah_theta(r) == cplx(1));
    zs.zeros = {0};
    CHECK(std::abs(lift_zero_variables(r, zs).primary[0] - 1.0) <= 1e-16);

    const FamilySpec aw{Family::AskeyWilson, 1, {0.5, 0.6, 0.7, 0.8}, {}, 2.0};
    zs.zeros = {1};
    CHECK(std::abs(lift_zero_variables(aw, zs).primary[0] - 1.0) <= 1e-16);

    zs.zeros = {0};
    CHECK_THROWS_AS(lift_zero_variables(w, zs), BranchPoint);
    CHECK_THROWS_AS(lift_zero_variables(ghyp(1, {2}, {3}), zs), InvalidParameters);

    // q-Racah companions satisfy z(x +- 1) with z = q^{-x} + gamma delta q^{x+1}.
    const FamilySpec qr{Family::QRacah, 1, {0.7, 0.9, 0.4, 0.6}, {}, 1.5};
    const cplx q = 1.5, gd = 0.4 * 0.6, X(0.3, 0.2);
    auto zx = [&](cplx x) { return std::pow(q, -x) + gd * std::pow(q, x + 1.0); };
    zs.zeros = {zx(X)};
    const LiftedZeros lz = lift_zero_variables(qr, zs);
    const CVec both{lz.plus[0], lz.minus[0]};
    CHECK(multiset_match(both, CVec{zx(X + 1.0), zx(X - 1.0)}) <= 1e-13);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(validate(ghyp(0, {2}, {3})), InvalidParameters);
    CHECK_THROWS_AS(validate(ghyp(2, {2}, {0})), InvalidParameters);
    CHECK_THROWS_AS(validate(ghyp(3, {2}, {-2})), InvalidParameters);
    CHECK_NOTHROW(validate(ghyp(2, {2}, {-2})));
    CHECK_THROWS_AS(validate(ghyp(2, {2}, {3.0, std::nan("")})), InvalidParameters);
    CHECK_THROWS_AS(validate({Family::GHyp, 2, {2}, {3}, 2.0}), InvalidParameters);
    CHECK_THROWS_AS(validate({Family::GBasicHyp, 2, {2}, {3}, std::nullopt}), InvalidParameters);
    CHECK_THROWS_AS(validate({Family::GBasicHyp, 2, {2}, {3}, 1.0 + 1e-11}), InvalidParameters);
    // beta q^j = 1 at j = 1.
    CHECK_THROWS_AS(validate({Family::GBasicHyp, 3, {2}, {0.5}, 2.0}), InvalidParameters);
    CHECK_THROWS_AS(validate({Family::Wilson, 2, {0.5, 0.5}, {}, std::nullopt}), InvalidParameters);
    CHECK_THROWS_AS(validate({Family::Wilson, 2, {0.5, -0.5, 1, 1}, {}, std::nullopt}), InvalidParameters);
    CHECK_THROWS_AS(parse_family("legendre"), InvalidParameters);
    CHECK(parse_family("Askey-Wilson") == Family::AskeyWilson);
}

TEST_CASE("q -> 1 limit of the basic polynomial") {
    const FamilySpec s{Family::GBasicHyp, 4, {0.7}, {1.9}, std::nullopt};
    const double d3 = q_to_one_limit_check(s, 1.001), d4 = q_to_one_limit_check(s, 1.0001);
    CHECK(d3 <= 1e-2);
    CHECK(d4 / d3 == doctest::Approx(0.1).epsilon(0.05));
    const FamilySpec s0{Family::GBasicHyp, 0, {0.7}, {1.9}, std::nullopt};
    CHECK(q_to_one_limit_check(s0, 1.001) == 0.0);
    CHECK_THROWS_AS(q_to_one_limit_check(s, 1.1), InvalidParameters);
}
