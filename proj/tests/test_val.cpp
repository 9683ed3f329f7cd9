#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "padic/val.hpp"

#include <stdexcept>

using namespace padic;

TEST_CASE("ExtVal ordering and classification") {
    ExtVal a(3), b(Rat(1, 2)), pi = ExtVal::pos_inf(), ni = ExtVal::neg_inf();
    CHECK(b < a);
    CHECK(a < pi);
    CHECK(ni < b);
    CHECK(ni < pi);
    CHECK(pi == ExtVal::pos_inf());
    CHECK(ni == ExtVal::neg_inf());
    CHECK(a != pi);
    CHECK(a.is_finite());
    CHECK(pi.is_pos_inf());
    CHECK(ni.is_neg_inf());
    CHECK(23 == ExtVal(23).finite());
    CHECK_THROWS_AS((void)pi.finite(), std::invalid_argument);
}

TEST_CASE("ExtVal addition conventions") {
    ExtVal pi = ExtVal::pos_inf(), ni = ExtVal::neg_inf();
    CHECK((ExtVal(2) + ExtVal(Rat(1, 2))) == ExtVal(Rat(5, 2)));
    CHECK((pi + ExtVal(5)) == pi);
    CHECK((ni + ExtVal(5)) == ni);
    CHECK((pi + pi) == pi);
    CHECK((ni + ni) == ni);
    CHECK_THROWS_AS(pi + ni, std::invalid_argument);
    CHECK_THROWS_AS(ni + pi, std::invalid_argument);
}

TEST_CASE("ExtVal subtraction is total with inf - inf = 0") {
    ExtVal pi = ExtVal::pos_inf(), ni = ExtVal::neg_inf();
    CHECK((pi - pi) == ExtVal(0));
    CHECK((ni - ni) == ExtVal(0));
    CHECK((pi - ni) == pi);
    CHECK((ni - pi) == ni);
    CHECK((pi - ExtVal(7)) == pi);
    CHECK((ExtVal(7) - pi) == ni);
    CHECK((ExtVal(7) - ni) == pi);
    CHECK((ExtVal(7) - ExtVal(3)) == ExtVal(4));
    CHECK((-pi) == ni);
    CHECK((-ExtVal(4)) == ExtVal(-4));
}

TEST_CASE("ExtVal scaling") {
    ExtVal pi = ExtVal::pos_inf(), ni = ExtVal::neg_inf();
    CHECK(ExtVal(6).scale(Rat(1, 3)) == ExtVal(2));
    CHECK(ExtVal(6).scale(Rat(0)) == ExtVal(0));
    CHECK(pi.scale(Rat(2)) == pi);
    CHECK(pi.scale(Rat(-2)) == ni);
    CHECK(ni.scale(Rat(-1)) == pi);
    CHECK_THROWS_AS(pi.scale(Rat(0)), std::invalid_argument);
    CHECK_THROWS_AS(ni.scale(Rat(0)), std::invalid_argument);
}

TEST_CASE("ExtVal meet, join, diff") {
    ExtVal pi = ExtVal::pos_inf(), ni = ExtVal::neg_inf();
    CHECK(meet(ExtVal(2), ExtVal(5)) == ExtVal(2));
    CHECK(join(ExtVal(2), ExtVal(5)) == ExtVal(5));
    CHECK(meet(pi, ExtVal(5)) == ExtVal(5));
    CHECK(join(ni, ExtVal(5)) == ExtVal(5));
    // diff keeps a only when strictly above b
    CHECK(vdiff(ExtVal(5), ExtVal(2)) == ExtVal(5));
    CHECK(vdiff(ExtVal(2), ExtVal(2)) == ni);
    CHECK(vdiff(ExtVal(1), ExtVal(2)) == ni);
    CHECK(vdiff(pi, ExtVal(100)) == pi);
    CHECK(vdiff(ni, ni) == ni);
}

TEST_CASE("ExtVal string form") {
    CHECK(ExtVal(5).str() == "5");
    CHECK(ExtVal(Rat(-3, 4)).str() == "-3/4");
    CHECK(ExtVal::pos_inf().str() == "inf");
    CHECK(ExtVal::neg_inf().str() == "-inf");
}

TEST_CASE("AggVal poly shape canonicalizes entries equal to the default") {
    AggVal a = AggVal::poly(ExtVal(0));
    a.set(3, ExtVal(5));
    a.set(7, ExtVal(0)); // equals default: dropped
    CHECK(a.entries().size() == 1);
    CHECK(a.at(3) == ExtVal(5));
    CHECK(a.at(7) == ExtVal(0));
    CHECK(a.at(123456) == ExtVal(0));
    a.set(3, ExtVal(0)); // reset to default: dropped
    CHECK(a.entries().empty());
}

TEST_CASE("AggVal mpoly keys respect rank") {
    AggVal a = AggVal::mpoly(2, ExtVal::pos_inf());
    a.set(AggVal::MKey{1, 2}, ExtVal(4));
    CHECK(a.at(AggVal::MKey{1, 2}) == ExtVal(4));
    CHECK(a.at(AggVal::MKey{0, 0}) == ExtVal::pos_inf());
    CHECK_THROWS_AS(a.set(AggVal::MKey{1}, ExtVal(1)), std::invalid_argument);
}

TEST_CASE("AggVal tuple shape has fixed slots and no default") {
    AggVal t = AggVal::tuple({ExtVal(1), ExtVal(2)});
    CHECK(t.tuple_size() == 2);
    CHECK(t.at(0) == ExtVal(1));
    CHECK(t.at(1) == ExtVal(2));
    CHECK_THROWS_AS((void)t.at(2), std::out_of_range);
    CHECK_THROWS_AS((void)t.dflt(), std::invalid_argument);
    t.set(0, ExtVal(9));
    CHECK(t.at(0) == ExtVal(9));
}

TEST_CASE("AggVal pointwise arithmetic over the key union") {
    AggVal a = AggVal::poly(ExtVal(0));
    a.set(1, ExtVal(2));
    a.set(2, ExtVal(3));
    AggVal b = AggVal::poly(ExtVal(1));
    b.set(2, ExtVal(1));
    b.set(5, ExtVal(-1));
    AggVal s = aggval_add(a, b);
    CHECK(s.dflt() == ExtVal(1));
    CHECK(s.at(1) == ExtVal(3));
    CHECK(s.at(2) == ExtVal(4));
    CHECK(s.at(5) == ExtVal(-1));
    CHECK(s.at(99) == ExtVal(1));
    // meet/join
    AggVal m = aggval_meet(a, b);
    CHECK(m.dflt() == ExtVal(0));
    CHECK(m.at(5) == ExtVal(-1));
    CHECK(m.at(1) == ExtVal(1));
    AggVal j = aggval_join(a, b);
    CHECK(j.at(1) == ExtVal(2));
    CHECK(j.at(5) == ExtVal(0));
    // entries equal to the result default are canonicalized away
    AggVal d = aggval_sub(a, a);
    CHECK(d.dflt() == ExtVal(0));
    CHECK(d.entries().empty());
}

TEST_CASE("AggVal diff is pointwise") {
    AggVal a = AggVal::poly(ExtVal(5));
    a.set(0, ExtVal(1));
    AggVal b = AggVal::poly(ExtVal(2));
    b.set(0, ExtVal(1));
    AggVal d = aggval_diff(a, b);
    CHECK(d.dflt() == ExtVal(5));
    CHECK(d.at(0) == ExtVal::neg_inf());
}

TEST_CASE("AggVal comparison is a partial order with incomparable pairs") {
    AggVal a = AggVal::poly(ExtVal(0));
    AggVal b = AggVal::poly(ExtVal(0));
    CHECK(aggval_compare(a, b) == ValCmp::eq);
    b.set(1, ExtVal(1));
    CHECK(aggval_compare(a, b) == ValCmp::lt);
    CHECK(aggval_compare(b, a) == ValCmp::gt);
    CHECK(aggval_le(a, b));
    CHECK(aggval_lt(a, b));
    CHECK(aggval_ge(b, a));
    CHECK(aggval_gt(b, a));
    a.set(2, ExtVal(1));
    CHECK(aggval_compare(a, b) == ValCmp::incomparable);
    CHECK(!aggval_le(a, b));
    CHECK(!aggval_ge(a, b));
    // defaults participate in the comparison
    AggVal c = AggVal::poly(ExtVal(1));
    AggVal e = AggVal::poly(ExtVal(0));
    e.set(4, ExtVal(2));
    CHECK(aggval_compare(c, e) == ValCmp::incomparable);
}

TEST_CASE("AggVal tuple comparison") {
    AggVal t1 = AggVal::tuple({ExtVal(1), ExtVal(1)});
    AggVal t2 = AggVal::tuple({ExtVal(1), ExtVal(2)});
    AggVal t3 = AggVal::tuple({ExtVal(2), ExtVal(1)});
    CHECK(aggval_compare(t1, t2) == ValCmp::lt);
    CHECK(aggval_compare(t2, t3) == ValCmp::incomparable);
    CHECK(aggval_compare(t1, t1) == ValCmp::eq);
    CHECK_THROWS_AS(aggval_compare(t1, AggVal::tuple({ExtVal(1)})), std::invalid_argument);
}

TEST_CASE("rational_valuation") {
    CHECK(rational_valuation(Rat(12), Int(2)) == ExtVal(2));
    CHECK(rational_valuation(Rat(12), Int(3)) == ExtVal(1));
    CHECK(rational_valuation(Rat(1, 8), Int(2)) == ExtVal(-3));
    CHECK(rational_valuation(Rat(-50, 3), Int(5)) == ExtVal(2));
    CHECK(rational_valuation(Rat(7), Int(5)) == ExtVal(0));
    CHECK(rational_valuation(Rat(0), Int(5)) == ExtVal::pos_inf());
}
