#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "padic/approx.hpp"
#include "padic/error.hpp"

#include <stdexcept>

using namespace padic;

namespace {

// Rational oracle: check a kernel element agrees with an exact rational at the
// element's full stated precision.
bool weq(const FieldPtr& f, const ApproxElt& x, const Rat& q) {
    return weak_equal(x, embed_full(f, q));
}

FieldPtr q2(long long cap = 12) { return make_prime_field(2, cap); }
FieldPtr q3(long long cap = 12) { return make_prime_field(3, cap); }
FieldPtr q5(long long cap = 12) { return make_prime_field(5, cap); }

// Q2(sqrt2): Eisenstein x^2 - 2.
FieldPtr q2_sqrt2(long long cap = 12) {
    auto base = q2(cap);
    return make_extension(base, FieldKind::eisen,
                          {embed_full(base, -2), exact_zero_elt(base), embed_full(base, 1)}, cap);
}

// Unramified quadratic over Q2: x^2 + x + 1.
FieldPtr q2_unram2(long long cap = 12) {
    auto base = q2(cap);
    return make_extension(base, FieldKind::inert,
                          {embed_full(base, 1), embed_full(base, 1), embed_full(base, 1)}, cap);
}

} // namespace

TEST_CASE("prime field construction validates input") {
    CHECK_THROWS_AS(make_prime_field(4, 10), std::invalid_argument);
    CHECK_THROWS_AS(make_prime_field(2, 0), std::invalid_argument);
    auto f = q2();
    CHECK(f->p == 2);
    CHECK(f->capacity == 12);
    CHECK(abs_degree(f) == 1);
}

TEST_CASE("embedding rationals into Qp") {
    auto f = q2(10);
    // DERIVED: 12 = 2^2 * 3, so v=2, u=3, r=capacity
    auto x = embed_full(f, 12);
    CHECK(x.v == 2);
    CHECK(x.r == 10);
    CHECK(x.u == 3);
    CHECK(weak_valuation(x) == ExtVal(2));
    CHECK(abs_precision(x) == ExtVal(12));
    // DERIVED: 3/4 has v=-2, u=3
    auto y = embed_full(f, Rat(3, 4));
    CHECK(y.v == -2);
    CHECK(y.u == 3);
    // DERIVED: 1/3 = 3^{-1} mod 2^4 is 11 (3*11 = 33 = 1 + 32)
    auto z = embed(f, Rat(1, 3), 4);
    CHECK(z.v == 0);
    CHECK(z.r == 4);
    CHECK(z.u == 11);
    // embedding exact zero stays exactly zero
    CHECK(is_exact_zero(embed_full(f, 0)));
    CHECK(is_exact_zero(embed(f, 0, 5)));
    // embedding at requested absolute precision is exact
    for (long long k = -3; k <= 8; ++k) {
        auto e = embed(f, 5, k);
        CHECK(abs_prec_own(e) == k);
    }
}

TEST_CASE("weakly zero elements carry absolute precision only") {
    auto f = q2(10);
    auto z = weakly_zero_elt(f, 4);
    CHECK(is_weakly_zero(z));
    CHECK(!is_exact_zero(z));
    CHECK(abs_prec_own(z) == 4);
    CHECK(weak_val_own(z) == 4);
    CHECK(rel_prec_own(z) == 0);
    auto e = exact_zero_elt(f);
    CHECK(is_exact_zero(e));
    CHECK(is_weakly_zero(e));
    CHECK(abs_precision(e) == ExtVal::pos_inf());
    CHECK(weak_valuation(e) == ExtVal::pos_inf());
}

TEST_CASE("addition tracks the minimum absolute precision") {
    auto f = q2(8);
    // DERIVED: (1 + O(2^8)) + (1 + O(2^8)) = 2 + O(2^8): v=1, u=1, r=7
    auto one = embed_full(f, 1);
    auto s = add(one, one);
    CHECK(s.v == 1);
    CHECK(s.u == 1);
    CHECK(s.r == 7);
    CHECK(abs_prec_own(s) == 8);
    // cancellation: x - x is weakly zero at the joint absolute precision
    auto x = embed_full(f, 7);
    auto d = sub(x, x);
    CHECK(is_weakly_zero(d));
    CHECK(abs_prec_own(d) == 8);
    // adding a weakly zero lowers precision to its absolute precision
    auto wz = weakly_zero_elt(f, 3);
    auto s2 = add(one, wz);
    CHECK(s2.v == 0);
    CHECK(s2.r == 3);
    CHECK(s2.u == 1);
    // exact zero is the identity
    CHECK(weak_equal(add(one, exact_zero_elt(f)), one));
    CHECK(abs_prec_own(add(one, exact_zero_elt(f))) == 8);
}

TEST_CASE("addition matches the rational oracle") {
    auto f = q3(14);
    Rat qs[] = {Rat(5), Rat(-7, 2), Rat(9), Rat(1, 3), Rat(-27), Rat(22, 5)};
    for (const Rat& a : qs)
        for (const Rat& b : qs) {
            CHECK(weq(f, add(embed_full(f, a), embed_full(f, b)), a + b));
            CHECK(weq(f, sub(embed_full(f, a), embed_full(f, b)), a - b));
            CHECK(weq(f, mul(embed_full(f, a), embed_full(f, b)), a * b));
            if (b != 0) CHECK(weq(f, div_elt(embed_full(f, a), embed_full(f, b)), a / b));
        }
}

TEST_CASE("multiplication combines valuations and keeps min relative precision") {
    auto f = q2(10);
    auto x = embed_full(f, 12); // v=2
    auto y = embed(f, 2, 5);    // v=1, r=4
    auto z = mul(x, y);
    CHECK(z.v == 3);
    CHECK(z.r == 4);
    CHECK(weq(f, z, 24));
    // weakly zero factor: result weakly zero with summed valuation
    auto wz = weakly_zero_elt(f, 2);
    auto z2 = mul(x, wz);
    CHECK(is_weakly_zero(z2));
    CHECK(weak_val_own(z2) == 4);
    // exact zero annihilates
    CHECK(is_exact_zero(mul(x, exact_zero_elt(f))));
}

TEST_CASE("division and inverse") {
    auto f = q5(10);
    auto x = embed_full(f, 35);
    auto inv = inverse(x);
    CHECK(weq(f, mul(x, inv), 1));
    CHECK(weak_val_own(inv) == -1);
    CHECK_THROWS_AS(inverse(weakly_zero_elt(f, 3)), precision_error);
    CHECK_THROWS_AS(div_elt(x, weakly_zero_elt(f, 3)), precision_error);
    CHECK(is_exact_zero(div_elt(exact_zero_elt(f), x)));
}

TEST_CASE("pow_elt handles positive, zero and negative exponents") {
    auto f = q3(10);
    auto x = embed_full(f, 6);
    CHECK(weq(f, pow_elt(x, 0), 1));
    CHECK(weq(f, pow_elt(x, 3), 216));
    CHECK(weq(f, pow_elt(x, -2), Rat(1, 36)));
}

TEST_CASE("change_precision truncates and preserves the unit") {
    auto f = q2(10);
    // DERIVED: 21 mod 2^3 = 5
    auto x = embed_full(f, 21);
    auto t = change_precision_own(x, 3);
    CHECK(t.v == 0);
    CHECK(t.r == 3);
    CHECK(t.u == 5);
    // truncating to or below the valuation leaves a weak zero
    auto wz = change_precision_own(x, 0);
    CHECK(is_weakly_zero(wz));
    CHECK(abs_prec_own(wz) == 0);
    // increasing precision is refused
    CHECK_THROWS_AS(change_precision_own(t, 5), std::invalid_argument);
    // exact zero may be truncated to any finite precision
    auto z = change_precision_own(exact_zero_elt(f), 4);
    CHECK(is_weakly_zero(z));
    CHECK(abs_prec_own(z) == 4);
    // ExtVal-facing wrapper uses absolute normalization
    auto t2 = change_precision(x, ExtVal(2));
    CHECK(abs_prec_own(t2) == 2);
}

TEST_CASE("Eisenstein extension arithmetic") {
    auto E = q2_sqrt2();
    auto g = generator(E);
    CHECK(weak_val_own(g) == 1);
    CHECK(weak_valuation(g) == ExtVal(Rat(1, 2)));
    CHECK(abs_degree(E) == 2);
    CHECK(E->abs_e == 2);
    // g^2 = 2
    CHECK(weak_equal(mul(g, g), coerce_up(E, embed_full(q2(), 2))));
    // (1+g)(1-g) = 1 - 2 = -1
    auto one = embed_full(E, 1);
    auto a = add(one, g), b = sub(one, g);
    CHECK(weak_equal(mul(a, b), embed_full(E, -1)));
    // inverse round trip
    CHECK(weak_equal(mul(inverse(a), a), one));
    CHECK(weak_equal(mul(inverse(g), g), one));
    CHECK(weak_val_own(inverse(g)) == -1);
    // defining polynomial evaluates to (weak) zero at g
    auto fpoly = make_poly(E, {embed_full(E, -2), exact_zero_elt(E), embed_full(E, 1)});
    CHECK(is_weakly_zero(poly_eval(fpoly, g)));
}

TEST_CASE("unramified extension arithmetic") {
    auto U = q2_unram2();
    auto w = generator(U);
    CHECK(weak_val_own(w) == 0);
    CHECK(U->abs_f == 2);
    CHECK(U->abs_e == 1);
    // w^2 + w + 1 = 0
    auto expr = add(add(mul(w, w), w), embed_full(U, 1));
    CHECK(is_weakly_zero(expr));
    // w^3 = 1
    CHECK(weak_equal(pow_elt(w, 3), embed_full(U, 1)));
    // inverse of w is w^2
    CHECK(weak_equal(inverse(w), mul(w, w)));
}

TEST_CASE("mixed tower: Eisenstein over unramified") {
    auto U = q2_unram2();
    auto L = make_extension(U, FieldKind::eisen,
                            {embed_full(U, -2), exact_zero_elt(U), embed_full(U, 1)}, 12);
    CHECK(abs_degree(L) == 4);
    CHECK(L->abs_e == 2);
    CHECK(L->abs_f == 2);
    auto pi = generator(L);
    CHECK(weak_valuation(pi) == ExtVal(Rat(1, 2)));
    auto wl = coerce_up(L, generator(U));
    CHECK(weak_valuation(wl) == ExtVal(0));
    // pi^2 = 2 still, and the inert generator keeps its relation
    CHECK(weak_equal(mul(pi, pi), embed_full(L, 2)));
    CHECK(is_weakly_zero(add(add(mul(wl, wl), wl), embed_full(L, 1))));
    // product valuation: val(2 * pi) = 3/2
    CHECK(weak_valuation(mul(embed_full(L, 2), pi)) == ExtVal(Rat(3, 2)));
}

TEST_CASE("weakly zero extension elements have exact absolute precision") {
    auto E = q2_sqrt2();
    for (long long k = -4; k <= 7; ++k) {
        auto z = weakly_zero_elt(E, k);
        CHECK(is_weakly_zero(z));
        CHECK(abs_prec_own(z) == k);
    }
    auto U = q2_unram2();
    for (long long k = -4; k <= 7; ++k) CHECK(abs_prec_own(weakly_zero_elt(U, k)) == k);
    // embed honors requested precision exactly (within capacity)
    for (long long k = 1; k <= 9; ++k) CHECK(abs_prec_own(embed(E, 3, k)) == k);
}

TEST_CASE("extension capacity is enforced by clamping") {
    auto E = q2_sqrt2(6);
    auto x = embed_full(E, 3);
    CHECK(rel_prec_own(x) <= 6);
    auto y = mul(x, x);
    CHECK(rel_prec_own(y) <= 6);
    auto z = mul(generator(E), x);
    CHECK(rel_prec_own(z) <= 6);
}

TEST_CASE("coercion between structurally equal fields") {
    auto f1 = q2(12);
    auto f2 = q2(6);
    auto x = embed_full(f1, 5);
    auto y = coerce_field(f2, x);
    CHECK(y.r == 6);
    CHECK(weq(f2, y, 5));
    auto E1 = q2_sqrt2(12), E2 = q2_sqrt2(6);
    auto g = generator(E1);
    auto g2 = coerce_field(E2, g);
    CHECK(rel_prec_own(g2) <= 6);
    CHECK(weak_val_own(g2) == 1);
    CHECK_THROWS_AS(coerce_field(q3(), x), std::invalid_argument);
}

TEST_CASE("defining polynomial checks") {
    auto base = q2(10);
    // x^2 - 1 is not Eisenstein: constant term has valuation 0
    CHECK(check_defining(FieldKind::eisen, base,
                         {embed_full(base, -1), exact_zero_elt(base), embed_full(base, 1)}) ==
          DefCheck::violated);
    CHECK_THROWS_AS(make_extension(base, FieldKind::eisen,
                                   {embed_full(base, -1), exact_zero_elt(base), embed_full(base, 1)},
                                   10),
                    std::invalid_argument);
    // x^2 - 2 is Eisenstein
    CHECK(check_defining(FieldKind::eisen, base,
                         {embed_full(base, -2), exact_zero_elt(base), embed_full(base, 1)}) ==
          DefCheck::confirmed);
    // constant term O(2^1): could be Eisenstein, cannot tell yet
    CHECK(check_defining(FieldKind::eisen, base,
                         {weakly_zero_elt(base, 1), exact_zero_elt(base), embed_full(base, 1)}) ==
          DefCheck::undecided);
    // constant term O(2^2): valuation >= 2, definitely not Eisenstein
    CHECK(check_defining(FieldKind::eisen, base,
                         {weakly_zero_elt(base, 2), exact_zero_elt(base), embed_full(base, 1)}) ==
          DefCheck::violated);
    // undecided definitions are accepted by make_extension
    auto E = make_extension(base, FieldKind::eisen,
                            {weakly_zero_elt(base, 1), exact_zero_elt(base), embed_full(base, 1)}, 10);
    CHECK(E->rel_degree == 2);
    // inert: unit constant and lead
    CHECK(check_defining(FieldKind::inert, base,
                         {embed_full(base, 1), embed_full(base, 1), embed_full(base, 1)}) ==
          DefCheck::confirmed);
    CHECK(check_defining(FieldKind::inert, base,
                         {embed_full(base, 2), embed_full(base, 1), embed_full(base, 1)}) ==
          DefCheck::violated);
}

TEST_CASE("linear_solve matches the rational oracle") {
    auto f = q5(14);
    // DERIVED: solve [[1,2],[3,4]] y = [5,6] -> y = (-4, 9/2)
    std::vector<std::vector<ApproxElt>> a{
        {embed_full(f, 1), embed_full(f, 2)},
        {embed_full(f, 3), embed_full(f, 4)},
    };
    std::vector<ApproxElt> b{embed_full(f, 5), embed_full(f, 6)};
    auto y = linear_solve(a, b);
    CHECK(weq(f, y[0], Rat(-4)));
    CHECK(weq(f, y[1], Rat(9, 2)));
    // singular-looking (weakly zero column) systems raise precision errors
    std::vector<std::vector<ApproxElt>> s{
        {weakly_zero_elt(f, 3), embed_full(f, 2)},
        {weakly_zero_elt(f, 3), embed_full(f, 4)},
    };
    CHECK_THROWS_AS(linear_solve(s, b), precision_error);
}

TEST_CASE("determinant matches the rational oracle and degrades gracefully") {
    auto f = q2(12);
    std::vector<std::vector<ApproxElt>> a{
        {embed_full(f, 2), embed_full(f, 3), embed_full(f, 5)},
        {embed_full(f, 7), embed_full(f, 11), embed_full(f, 13)},
        {embed_full(f, 17), embed_full(f, 19), embed_full(f, 23)},
    };
    // DERIVED: det = 2*(11*23-13*19) + ... = -78
    CHECK(weq(f, determinant(a), Rat(-78)));
    std::vector<std::vector<ApproxElt>> z{
        {weakly_zero_elt(f, 4), embed_full(f, 1)},
        {weakly_zero_elt(f, 4), embed_full(f, 1)},
    };
    auto d = determinant(z);
    CHECK(is_weakly_zero(d));
}

TEST_CASE("polynomial arithmetic and evaluation") {
    auto f = q3(12);
    // f(x) = x^2 - 5x + 6, g(x) = x - 2
    auto P = make_poly(f, {embed_full(f, 6), embed_full(f, -5), embed_full(f, 1)});
    auto G = make_poly(f, {embed_full(f, -2), embed_full(f, 1)});
    CHECK(weak_degree(P) == 2);
    CHECK(weq(f, poly_eval(P, embed_full(f, 4)), 2));
    auto dr = poly_divrem(P, G);
    // quotient x - 3, remainder 0
    CHECK(weq(f, dr.quot.coeffs[1], 1));
    CHECK(weq(f, dr.quot.coeffs[0], -3));
    for (const auto& c : dr.rem.coeffs) CHECK(is_weakly_zero(c));
    // f = q*g + r reconstruction for a non-trivial remainder
    auto H = make_poly(f, {embed_full(f, 1), embed_full(f, 1)}); // x + 1
    auto dr2 = poly_divrem(P, H);
    auto back = poly_add(poly_mul(dr2.quot, H), dr2.rem);
    for (std::size_t i = 0; i < P.coeffs.size(); ++i) CHECK(weak_equal(back.coeffs[i], P.coeffs[i]));
    // derivative
    auto D = poly_derivative(P);
    CHECK(weq(f, D.coeffs[0], -5));
    CHECK(weq(f, D.coeffs[1], 2));
}

TEST_CASE("polynomial shift and scale_x match the rational oracle") {
    auto f = q5(12);
    // P(x) = 2x^3 - x + 4, a = 3: P(x+3) = 2x^3 + 18x^2 + 53x + 55
    auto P = make_poly(f, {embed_full(f, 4), embed_full(f, -1), exact_zero_elt(f), embed_full(f, 2)});
    auto S = poly_shift(P, embed_full(f, 3));
    CHECK(weq(f, S.coeffs[0], 55));
    CHECK(weq(f, S.coeffs[1], 53));
    CHECK(weq(f, S.coeffs[2], 18));
    CHECK(weq(f, S.coeffs[3], 2));
    // P(5x) = 250x^3 - 5x + 4
    auto X = poly_scale_x(P, embed_full(f, 5));
    CHECK(weq(f, X.coeffs[0], 4));
    CHECK(weq(f, X.coeffs[1], -5));
    CHECK(weq(f, X.coeffs[3], 250));
}

TEST_CASE("resultants via the Sylvester matrix") {
    auto f = q2(14);
    // DERIVED: Res(x-1)(x-2), x-3) = g(1)*g(2) = 2
    auto P = make_poly(f, {embed_full(f, 2), embed_full(f, -3), embed_full(f, 1)});
    auto G = make_poly(f, {embed_full(f, -3), embed_full(f, 1)});
    CHECK(weq(f, resultant(P, G), 2));
    // DERIVED: Res(x-a, x-b) = a-b
    auto A = make_poly(f, {embed_full(f, -5), embed_full(f, 1)});
    auto B = make_poly(f, {embed_full(f, -9), embed_full(f, 1)});
    CHECK(weq(f, resultant(A, B), 5 - 9));
    // constant cases
    auto C = make_poly(f, {embed_full(f, 3)});
    CHECK(weq(f, resultant(C, P), 9));
    CHECK(weq(f, resultant(P, C), 9));
    // weakly zero lead rejected
    auto W = make_poly(f, {embed_full(f, 1), weakly_zero_elt(f, 3)});
    CHECK_THROWS_AS(resultant(W, P), precision_error);
}

TEST_CASE("weak approximation round trip") {
    auto f = q2(10);
    auto x = embed_full(f, Rat(7, 3));
    auto rep = weak_approximation(x);
    auto back = embed_rep(f, rep, abs_prec_own(x));
    CHECK(weak_equal(back, x));
    CHECK(abs_prec_own(back) == abs_prec_own(x));
    auto E = q2_sqrt2();
    auto g = add(generator(E), embed_full(E, 5));
    auto rep2 = weak_approximation(g);
    auto back2 = embed_rep(E, rep2, abs_prec_own(g));
    CHECK(weak_equal(back2, g));
    // weakly zero approximates to exact zero
    auto wz = weakly_zero_elt(f, 5);
    CHECK(std::get<Rat>(weak_approximation(wz).node) == 0);
}

TEST_CASE("string rendering is stable") {
    auto f = q2(6);
    auto x = embed_full(f, 12);
    CHECK(to_string(x) == std::string("2^2*(1 + 1*2 + O(2^6))"));
    CHECK(to_string(weakly_zero_elt(f, 3)) == std::string("O(2^3)"));
    CHECK(to_string(exact_zero_elt(f)) == std::string("0 (exact)"));
}
