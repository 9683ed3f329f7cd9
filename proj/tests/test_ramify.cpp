#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "padic/ramify.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

using namespace padic;

namespace {

using VP = std::vector<std::pair<Rat, Rat>>;

// Random break sequence valid for the given e: strictly increasing positive
// positions, strictly decreasing integer sizes in [2, e].
VP random_breaks(std::mt19937_64& rng, long long e) {
    std::vector<long long> sizes;
    for (long long s = 2; s <= e; ++s) sizes.push_back(s);
    std::shuffle(sizes.begin(), sizes.end(), rng);
    std::size_t k = rng() % std::min<std::size_t>(sizes.size() + 1, 4);
    sizes.resize(k);
    std::sort(sizes.rbegin(), sizes.rend());
    VP bks;
    Rat v(0);
    for (long long s : sizes) {
        v += Rat(1 + static_cast<long long>(rng() % 8)) /
             Rat(1 + static_cast<long long>(rng() % 4));
        bks.emplace_back(v, Rat(s));
    }
    return bks;
}

Rat random_point(std::mt19937_64& rng) {
    return Rat(static_cast<long long>(rng() % 40)) /
           Rat(1 + static_cast<long long>(rng() % 5));
}

// The wild faces of a ramification polygon must mirror the break list:
// face i (left to right) has slope -v of the corresponding break read in
// descending v, right abscissa equal to that break's size, and the faces
// chain from abscissa 1 up to e (then a flat face up to e*d).
void check_polygon_matches_breaks(const RamificationData& rd) {
    std::size_t nwild = rd.lower_breaks.size();
    REQUIRE(rd.polygon.faces.size() == nwild + (rd.d > 1 ? 1 : 0));
    Rat left(1);
    for (std::size_t i = 0; i < nwild; ++i) {
        const NPFace& face = rd.polygon.faces[i];
        const auto& bk = rd.lower_breaks[nwild - 1 - i];
        CHECK(face.slope == -bk.first);
        CHECK(face.x1 == bk.second);
        CHECK(face.x0 == left);
        CHECK(face.y0 - face.y1 == bk.first * (face.x1 - face.x0));
        left = face.x1;
    }
    if (nwild > 0) CHECK(left == Rat(rd.e));
    if (rd.d > 1) {
        const NPFace& flat = rd.polygon.faces.back();
        CHECK(flat.slope == Rat(0));
        CHECK(flat.x0 == Rat(rd.e));
        CHECK(flat.x1 == Rat(rd.e * rd.d));
        CHECK(flat.y0 == Rat(0));
        CHECK(flat.y1 == Rat(0));
    }
}

} // namespace

TEST_CASE("ramify: prime field is trivial") {
    Engine eng;
    XF Q2 = xf_prime(&eng, 2);
    RamificationData rd = ramification_polygon(Q2);
    CHECK(rd.e == 1);
    CHECK(rd.d == 1);
    CHECK(rd.lower_breaks.empty());
    CHECK(rd.polygon.vertices == VP{{Rat(1), Rat(0)}});
    CHECK(rd.polygon.faces.empty());
}

TEST_CASE("ramify: quadratic sqrt(2) over Q2") {
    Engine eng;
    XF Q2 = xf_prime(&eng, 2);
    XF E = xf_extension(Q2, FieldKind::eisen,
                        {x_const(Q2, Rat(-2)), x_zero(Q2), x_one(Q2)});
    RamificationData rd = ramification_polygon(E);
    CHECK(rd.e == 2);
    CHECK(rd.d == 1);
    CHECK(rd.polygon.vertices == VP{{Rat(1), Rat(3)}, {Rat(2), Rat(0)}});
    REQUIRE(rd.polygon.faces.size() == 1);
    CHECK(rd.polygon.faces[0].slope == Rat(-3));
    CHECK(rd.lower_breaks == VP{{Rat(3), Rat(2)}});
    check_polygon_matches_breaks(rd);

    TransitionFunction phi = breaks_to_transition(rd.lower_breaks, rd.e);
    CHECK(phi.vertices == VP{{Rat(0), Rat(0)}, {Rat(3), Rat(3)}});
    CHECK(phi.final_slope == Rat(1) / Rat(2));
    CHECK(transition_eval(phi, Rat(2)) == Rat(2));
    CHECK(transition_eval(phi, Rat(3)) == Rat(3));
    CHECK(transition_eval(phi, Rat(5)) == Rat(4));
    CHECK(transition_inverse(phi, Rat(4)) == Rat(5));
}

TEST_CASE("ramify: eighth roots of unity over Q2") {
    Engine eng;
    XF Q2 = xf_prime(&eng, 2);
    // Minimal polynomial of zeta_8 - 1: x^4 + 4x^3 + 6x^2 + 4x + 2.
    XF E = xf_extension(Q2, FieldKind::eisen,
                        {x_const(Q2, Rat(2)), x_const(Q2, Rat(4)),
                         x_const(Q2, Rat(6)), x_const(Q2, Rat(4)), x_one(Q2)});
    RamificationData rd = ramification_polygon(E);
    CHECK(rd.e == 4);
    CHECK(rd.d == 1);
    CHECK(rd.polygon.vertices ==
          VP{{Rat(1), Rat(8)}, {Rat(2), Rat(4)}, {Rat(4), Rat(0)}});
    CHECK(rd.lower_breaks == VP{{Rat(2), Rat(4)}, {Rat(4), Rat(2)}});
    check_polygon_matches_breaks(rd);

    TransitionFunction phi = breaks_to_transition(rd.lower_breaks, rd.e);
    CHECK(phi.vertices == VP{{Rat(0), Rat(0)}, {Rat(2), Rat(2)}, {Rat(4), Rat(3)}});
    CHECK(phi.final_slope == Rat(1) / Rat(4));
    CHECK(transition_eval(phi, Rat(3)) == Rat(5) / Rat(2));
    CHECK(transition_eval(phi, Rat(8)) == Rat(4));
    CHECK(transition_inverse(phi, Rat(4)) == Rat(8));
}

TEST_CASE("ramify: tame cube root of 5 over Q5") {
    Engine eng;
    XF Q5 = xf_prime(&eng, 5);
    XF E = xf_extension(Q5, FieldKind::eisen,
                        {x_const(Q5, Rat(-5)), x_zero(Q5), x_zero(Q5), x_one(Q5)});
    RamificationData rd = ramification_polygon(E);
    CHECK(rd.e == 3);
    CHECK(rd.d == 1);
    // Tame: the three shifted points are collinear, a single face of slope -1
    // and the unique break at v = 1 of full size.
    CHECK(rd.polygon.vertices == VP{{Rat(1), Rat(2)}, {Rat(3), Rat(0)}});
    CHECK(rd.lower_breaks == VP{{Rat(1), Rat(3)}});
    check_polygon_matches_breaks(rd);

    TransitionFunction phi = breaks_to_transition(rd.lower_breaks, rd.e);
    CHECK(phi.vertices == VP{{Rat(0), Rat(0)}, {Rat(1), Rat(1)}});
    CHECK(phi.final_slope == Rat(1) / Rat(3));
}

TEST_CASE("ramify: unramified extension is a horizontal polygon") {
    Engine eng;
    XF Q2 = xf_prime(&eng, 2);
    // x^3 + x + 1 is irreducible mod 2.
    XF U = xf_extension(Q2, FieldKind::inert,
                        {x_one(Q2), x_one(Q2), x_zero(Q2), x_one(Q2)});
    RamificationData rd = ramification_polygon(U);
    CHECK(rd.e == 1);
    CHECK(rd.d == 3);
    CHECK(rd.lower_breaks.empty());
    CHECK(rd.polygon.vertices == VP{{Rat(1), Rat(0)}, {Rat(3), Rat(0)}});
    REQUIRE(rd.polygon.faces.size() == 1);
    CHECK(rd.polygon.faces[0].slope == Rat(0));
    check_polygon_matches_breaks(rd);

    TransitionFunction phi = breaks_to_transition(rd.lower_breaks, rd.e);
    CHECK(phi.vertices == VP{{Rat(0), Rat(0)}});
    CHECK(phi.final_slope == Rat(1));
    CHECK(transition_eval(phi, Rat(7) / Rat(3)) == Rat(7) / Rat(3));
}

TEST_CASE("ramify: eisenstein step over an unramified base") {
    Engine eng;
    XF Q2 = xf_prime(&eng, 2);
    XF U = xf_extension(Q2, FieldKind::inert,
                        {x_one(Q2), x_one(Q2), x_one(Q2)}); // x^2 + x + 1
    XF M = xf_extension(U, FieldKind::eisen,
                        {x_const(U, Rat(-2)), x_zero(U), x_one(U)});
    RamificationData rd = ramification_polygon(M);
    CHECK(rd.e == 2);
    CHECK(rd.d == 2);
    CHECK(rd.lower_breaks == VP{{Rat(3), Rat(2)}});
    // Wild face as for sqrt(2), then the flat unramified face out to e*d.
    CHECK(rd.polygon.vertices ==
          VP{{Rat(1), Rat(3)}, {Rat(2), Rat(0)}, {Rat(4), Rat(0)}});
    REQUIRE(rd.polygon.faces.size() == 2);
    CHECK(rd.polygon.faces[1].slope == Rat(0));
    check_polygon_matches_breaks(rd);
}

TEST_CASE("ramify: tower sqrt(pi) over sqrt(2) matches the direct quartic") {
    Engine eng;
    XF Q2 = xf_prime(&eng, 2);
    XF L1 = xf_extension(Q2, FieldKind::eisen,
                         {x_const(Q2, Rat(-2)), x_zero(Q2), x_one(Q2)});
    XF L2 = xf_extension(L1, FieldKind::eisen,
                         {x_neg(x_gen(L1)), x_zero(L1), x_one(L1)});
    RamificationData tower = ramification_polygon(L2);
    CHECK(tower.e == 4);
    CHECK(tower.d == 1);
    CHECK(tower.lower_breaks == VP{{Rat(3), Rat(4)}, {Rat(5), Rat(2)}});
    CHECK(tower.polygon.vertices ==
          VP{{Rat(1), Rat(11)}, {Rat(2), Rat(6)}, {Rat(4), Rat(0)}});
    check_polygon_matches_breaks(tower);

    // The same field generated in one Eisenstein step: x^4 - 2.
    XF D = xf_extension(Q2, FieldKind::eisen,
                        {x_const(Q2, Rat(-2)), x_zero(Q2), x_zero(Q2),
                         x_zero(Q2), x_one(Q2)});
    RamificationData direct = ramification_polygon(D);
    CHECK(direct.e == tower.e);
    CHECK(direct.d == tower.d);
    CHECK(direct.lower_breaks == tower.lower_breaks);
    CHECK(direct.polygon.vertices == tower.polygon.vertices);

    TransitionFunction phi = breaks_to_transition(tower.lower_breaks, tower.e);
    CHECK(phi.vertices == VP{{Rat(0), Rat(0)}, {Rat(3), Rat(3)}, {Rat(5), Rat(4)}});
    CHECK(phi.final_slope == Rat(1) / Rat(4));
}

TEST_CASE("ramify: break round-trip on random synthetic data") {
    std::mt19937_64 rng(20260814);
    const long long es[] = {2, 3, 4, 6, 8, 12};
    for (int trial = 0; trial < 100; ++trial) {
        long long e = es[rng() % 6];
        VP bks = random_breaks(rng, e);
        TransitionFunction phi = breaks_to_transition(bks, e);
        CHECK(phi.vertices.size() == bks.size() + 1);
        CHECK(transition_to_breaks(phi, e) == bks);
    }
}

TEST_CASE("ramify: eval and inverse are mutually inverse") {
    std::mt19937_64 rng(77001);
    for (int trial = 0; trial < 20; ++trial) {
        long long e = 2 + static_cast<long long>(rng() % 7);
        TransitionFunction phi = breaks_to_transition(random_breaks(rng, e), e);
        for (int i = 0; i < 50; ++i) {
            Rat v = random_point(rng);
            CHECK(transition_inverse(phi, transition_eval(phi, v)) == v);
            CHECK(transition_eval(phi, transition_inverse(phi, v)) == v);
        }
    }
}

TEST_CASE("ramify: composition agrees pointwise and associates") {
    std::mt19937_64 rng(5150);
    for (int trial = 0; trial < 50; ++trial) {
        long long ea = 2 + static_cast<long long>(rng() % 5);
        long long eb = 2 + static_cast<long long>(rng() % 5);
        long long ec = 2 + static_cast<long long>(rng() % 5);
        TransitionFunction a = breaks_to_transition(random_breaks(rng, ea), ea);
        TransitionFunction b = breaks_to_transition(random_breaks(rng, eb), eb);
        TransitionFunction c = breaks_to_transition(random_breaks(rng, ec), ec);

        TransitionFunction ab = transition_compose(a, b);
        CHECK(ab.final_slope == a.final_slope * b.final_slope);
        for (int i = 0; i < 50; ++i) {
            Rat v = random_point(rng);
            CHECK(transition_eval(ab, v) ==
                  transition_eval(a, transition_eval(b, v)));
        }
        // Composite of genuine transition functions is again one: its breaks
        // for the product index are well formed.
        VP bks = transition_to_breaks(ab, ea * eb);
        CHECK(breaks_to_transition(bks, ea * eb).vertices == ab.vertices);

        TransitionFunction lhs = transition_compose(transition_compose(a, b), c);
        TransitionFunction rhs = transition_compose(a, transition_compose(b, c));
        CHECK(lhs.vertices == rhs.vertices);
        CHECK(lhs.final_slope == rhs.final_slope);
    }
}

TEST_CASE("ramify: identity is neutral for composition") {
    TransitionFunction id = breaks_to_transition({}, 1);
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 10; ++trial) {
        long long e = 2 + static_cast<long long>(rng() % 7);
        TransitionFunction phi = breaks_to_transition(random_breaks(rng, e), e);
        TransitionFunction l = transition_compose(id, phi);
        TransitionFunction r = transition_compose(phi, id);
        CHECK(l.vertices == phi.vertices);
        CHECK(l.final_slope == phi.final_slope);
        CHECK(r.vertices == phi.vertices);
        CHECK(r.final_slope == phi.final_slope);
    }
}

TEST_CASE("ramify: malformed inputs are rejected") {
    CHECK_THROWS_AS(breaks_to_transition({{Rat(0), Rat(2)}}, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(breaks_to_transition({{Rat(2), Rat(2)}, {Rat(2), Rat(2)}}, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(breaks_to_transition({{Rat(1), Rat(1)}}, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(breaks_to_transition({{Rat(1), Rat(3)}}, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(breaks_to_transition({{Rat(1), Rat(2)}, {Rat(2), Rat(2)}}, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(breaks_to_transition({{Rat(1), Rat(2)}}, 0),
                    std::invalid_argument);

    TransitionFunction phi = breaks_to_transition({{Rat(1), Rat(2)}}, 2);
    CHECK_THROWS_AS(transition_eval(phi, Rat(-1)), std::invalid_argument);
    CHECK_THROWS_AS(transition_inverse(phi, Rat(-1)), std::invalid_argument);
    CHECK_THROWS_AS(transition_to_breaks(phi, 3), std::invalid_argument);

    TransitionFunction bad;
    bad.vertices = {{Rat(1), Rat(1)}};
    CHECK_THROWS_AS(transition_eval(bad, Rat(2)), std::invalid_argument);
    TransitionFunction convex;
    convex.vertices = {{Rat(0), Rat(0)}, {Rat(1), Rat(1)}, {Rat(2), Rat(3)}};
    convex.final_slope = Rat(1);
    CHECK_THROWS_AS(transition_eval(convex, Rat(1)), std::invalid_argument);
    CHECK_THROWS_AS(ramification_polygon(nullptr), std::invalid_argument);
}
