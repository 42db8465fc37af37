#include <cstdio>
#include <fstream>
#include <set>

#include <gtest/gtest.h>

#include "qstable/cli.hpp"

using namespace qstable;
using namespace qstable::cli;

namespace {

std::string data(const std::string& name) { return std::string(QSTABLE_DATA_DIR) + "/" + name; }

RunConfig config(const std::string& file, long h = 3) {
    RunConfig c;
    c.quiver_file = data(file);
    c.max_height = h;
    return c;
}

std::string write_temp(const std::string& name, const std::string& body) {
    const std::string path = ::testing::TempDir() + name;
    std::ofstream(path) << body;
    return path;
}

}  // namespace

TEST(Io, QuiverFormsAgree) {
    const auto a = io::quiver_from_json(io::json::parse(R"({"vertices":["a","b"],"arrows":[["a","b"],["a","b"]]})"));
    const auto m = io::quiver_from_json(io::json::parse(R"({"vertices":["a","b"],"matrix":[[0,2],[0,0]]})"));
    EXPECT_EQ(a.quiver.arrows(), m.quiver.arrows());
    EXPECT_EQ(a.quiver.arrows(), Quiver::kronecker().arrows());
    EXPECT_FALSE(a.theta);
    const auto t = io::quiver_from_json(io::json::parse(R"({"vertices":["1","2"],"matrix":[[0,1],[0,0]],"theta":[1,0]})"));
    EXPECT_EQ(*t.theta, (std::vector<long>{1, 0}));
}

TEST(Io, MalformedQuiversAreParseErrors) {
    for (const char* bad : {R"([])", R"({"vertices":[]})", R"({"vertices":["1"]})",
                            R"({"vertices":["1"],"arrows":[["1","2"]]})", R"({"vertices":["1","1"],"arrows":[]})",
                            R"({"vertices":["1"],"matrix":[[-1]]})", R"({"vertices":["1"],"matrix":[[0,1]]})",
                            R"({"vertices":["1"],"arrows":[],"matrix":[[0]]})"})
        EXPECT_THROW(io::quiver_from_json(io::json::parse(bad)), io::ParseError) << bad;
    EXPECT_THROW(io::load_quiver(write_temp("empty.json", "")), io::ParseError);
    EXPECT_THROW(io::load_quiver(data("no_such_file.json")), io::ParseError);
}

TEST(Io, RoundTrips) {
    const RationalFunction f(QPoly::from_ints({1, 0, -3}), QPoly::from_ints({2, 5}));
    EXPECT_EQ(io::rational_function_from_json(io::to_json(f)), f);
    EXPECT_EQ(io::to_json(QPoly::from_ints({0, -1, 2})), io::json::parse(R"(["0/1","-1/1","2/1"])"));
    const auto ctx = CountingContext::trivial(Quiver::loops(2), 3);
    const QSeries r = r_series(ctx);
    EXPECT_EQ(io::series_from_json(io::to_json(r), 1).terms(), r.terms());
    EXPECT_EQ(io::parse_rational("-6/4"), make_rational(-3, 2));
    EXPECT_THROW(io::parse_rational("1/0"), io::ParseError);
    EXPECT_THROW(io::parse_rational("x"), io::ParseError);
}

TEST(Io, Rendering) {
    EXPECT_EQ(io::ascending({BigRational(1), BigRational(-2)}, "t"), "1 - 2*t");
    EXPECT_EQ(io::ascending({BigRational(0), make_rational(1, 2), BigRational(-1)}, "t"), "1/2*t - t^2");
    EXPECT_EQ(io::ascending({}, "t"), "0");
    EXPECT_EQ(io::latex_poly({BigRational(0), make_rational(-1, 2), BigRational(3)}, "q"), "-\\frac{1}{2}q + 3q^{2}");
    EXPECT_EQ(io::latex(RationalFunction(QPoly(1), QPoly::from_ints({-1, 1}))), "\\frac{1}{-1 + q}");
}

TEST(Cli, ParseHelpers) {
    EXPECT_EQ(parse_csv("1,-2,3"), (std::vector<long>{1, -2, 3}));
    EXPECT_THROW(parse_csv("1,x"), io::ParseError);
    EXPECT_THROW(parse_csv("1.5"), io::ParseError);
    EXPECT_THROW(parse_format("yaml"), io::ParseError);
}

TEST(Cli, ASeriesLoop2) {
    RunConfig c = config("loop2.json", 4);
    const Outcome o = cmd_a_series(c);
    ASSERT_EQ(o.code, ok) << o.err;
    const auto j = io::json::parse(o.out);
    EXPECT_EQ(j.at("entries").size(), 4u);
    EXPECT_EQ(j.at("entries")[0].at("alpha"), io::json::parse("[1]"));
    EXPECT_EQ(io::qpoly_from_json(j.at("entries")[0].at("poly_q")), QPoly::monomial(2));
    EXPECT_EQ(io::qpoly_from_json(j.at("entries")[0].at("poly_qminus1")), QPoly::from_ints({1, 2, 1}));
}

TEST(Cli, ASeriesA2) {
    const Outcome o = cmd_a_series(config("a2.json", 4));
    ASSERT_EQ(o.code, ok) << o.err;
    const auto j = io::json::parse(o.out);
    for (const auto& e : j.at("entries")) {
        const auto alpha = e.at("alpha").get<std::vector<long>>();
        const bool simple = alpha == std::vector<long>{1, 0} || alpha == std::vector<long>{0, 1};
        EXPECT_EQ(io::qpoly_from_json(e.at("poly_q")), simple ? QPoly(1) : QPoly()) << e.dump();
    }
}

TEST(Cli, ValidationFailuresPrintNothing) {
    RunConfig c = config("loop2.json");
    c.quiver_file = write_temp("empty2.json", "");
    for (const auto& cmd : {"a-series", "r-series", "s-count", "f-expand", "verify", "necklaces"}) {
        const Outcome o = run(cmd, c);
        EXPECT_EQ(o.code, invalid_input) << cmd;
        EXPECT_TRUE(o.out.empty()) << cmd;
        EXPECT_FALSE(o.err.empty()) << cmd;
    }
    RunConfig bad = config("kronecker.json");
    bad.theta = std::vector<long>{1};
    EXPECT_EQ(cmd_a_series(bad).code, invalid_input);
    bad = config("loop2.json");
    bad.max_height = 0;
    EXPECT_EQ(cmd_a_series(bad).code, invalid_input);
    bad = config("loop2.json");
    bad.primes = {2, 4};
    EXPECT_EQ(cmd_verify(bad).code, invalid_input);
    bad = config("kronecker.json");
    bad.theta = std::vector<long>{1, 0};
    bad.slope = make_rational(1, 3);
    bad.max_height = 2;
    EXPECT_EQ(cmd_a_series(bad).code, invalid_input);  // slope 1/3 not attained
    EXPECT_EQ(run("bogus", config("loop2.json")).code, invalid_input);
}

TEST(Cli, ExpandRequiresTrivialStability) {
    RunConfig c = config("kronecker.json", 2);
    c.theta = std::vector<long>{1, 0};
    c.slope = make_rational(1, 2);
    const Outcome o = cmd_expand(c);
    EXPECT_EQ(o.code, invalid_input);
    EXPECT_TRUE(o.out.empty());
}

TEST(Cli, ExpandLoop2) {
    RunConfig c = config("loop2.json", 4);
    c.format = Format::text;
    const Outcome o = cmd_expand(c);
    ASSERT_EQ(o.code, ok) << o.err;
    EXPECT_NE(o.out.find("f_0 = 1 - 2*t\n"), std::string::npos) << o.out;
    EXPECT_NE(o.out.find(": match"), std::string::npos);
}

TEST(Cli, ExpandLoop3FirstOrder) {
    RunConfig c = config("loop3.json", 5);
    c.q1_order = 1;
    const Outcome o = cmd_expand(c);
    ASSERT_EQ(o.code, ok) << o.err;
    const auto j = io::json::parse(o.out);
    EXPECT_EQ(j.at("f").size(), 2u);
    EXPECT_TRUE(j.at("f1_conjecture").at("match").get<bool>());
}

TEST(Cli, ExpandA2IsTrivial) {
    RunConfig c = config("a2.json", 4);
    const Outcome o = cmd_expand(c);
    ASSERT_EQ(o.code, ok) << o.err;
    const auto j = io::json::parse(o.out);
    const auto& f = j.at("f");
    EXPECT_EQ(f[0].at("series").at("terms").size(), 1u);  // just the constant 1
    for (std::size_t n = 1; n < f.size(); ++n) EXPECT_TRUE(f[n].at("series").at("terms").empty());
}

TEST(Cli, Necklaces) {
    for (const char* q : {"loop2.json", "loop3.json"}) {
        const Outcome o = cmd_necklaces(config(q, 6));
        ASSERT_EQ(o.code, ok) << o.err;
        EXPECT_TRUE(io::json::parse(o.out).at("all_match").get<bool>());
    }
    EXPECT_EQ(cmd_necklaces(config("a2.json")).code, invalid_input);
}

TEST(Cli, SCountAndRSeries) {
    const Outcome s = cmd_s_count(config("loop1.json", 3));
    ASSERT_EQ(s.code, ok) << s.err;
    bool saw = false;
    const auto j = io::json::parse(s.out);
    for (const auto& e : j.at("entries"))
        if (e.at("alpha") == io::json::parse("[2]") && e.at("r") == 2) {
            EXPECT_EQ(io::qpoly_from_json(e.at("poly_q")), QPoly({BigRational(0), make_rational(-1, 2), make_rational(1, 2)}));
            saw = true;
        }
    EXPECT_TRUE(saw);
    const Outcome r = cmd_r_series(config("kronecker.json", 2));
    ASSERT_EQ(r.code, ok) << r.err;
    EXPECT_EQ(io::json::parse(r.out).at("entries").size(), 5u);
}

TEST(Cli, VerifyLoop2) {
    RunConfig c = config("loop2.json", 3);
    c.primes = {2};
    const Outcome o = cmd_verify(c);
    ASSERT_EQ(o.code, ok) << o.err;
    const auto j = io::json::parse(o.out);
    EXPECT_TRUE(j.at("all_match").get<bool>());
    EXPECT_TRUE(j.at("skipped").empty());
    EXPECT_GE(j.at("rows").size(), 9u);
}

TEST(Cli, VerifyKroneckerSlopeHalf) {
    RunConfig c = config("kronecker.json", 4);
    c.theta = std::vector<long>{1, 0};
    c.slope = make_rational(1, 2);
    c.primes = {2};
    const Outcome o = cmd_verify(c);
    ASSERT_EQ(o.code, ok) << o.err;
    std::set<std::string> seen;
    const auto j = io::json::parse(o.out);
    for (const auto& r : j.at("rows")) {
        EXPECT_TRUE(r.at("match").get<bool>());
        seen.insert(r.at("alpha").dump() + r.at("quantity").get<std::string>());
    }
    for (const char* a : {"[1,1]", "[2,2]"})
        for (const char* q : {"r", "a"}) EXPECT_TRUE(seen.count(std::string(a) + q)) << a << q;
}

TEST(Cli, VerifySkipsOverBudget) {
    RunConfig c = config("loop2.json", 3);
    c.primes = {3};
    c.budget = 1000;
    const Outcome o = cmd_verify(c);
    ASSERT_EQ(o.code, ok) << o.err;
    EXPECT_FALSE(io::json::parse(o.out).at("skipped").empty());
}

TEST(Cli, CorruptedTableIsCaught) {
    RunConfig c = config("loop2.json", 2);
    c.primes = {2};
    c.corrupt_table = true;
    const Outcome o = cmd_verify(c);
    EXPECT_EQ(o.code, mismatch);
    EXPECT_NE(o.err.find("mismatch: a at (1)"), std::string::npos) << o.err;
    EXPECT_FALSE(io::json::parse(o.out).at("all_match").get<bool>());
}

TEST(Cli, OutputIsDeterministic) {
    for (const Format f : {Format::json, Format::latex, Format::text}) {
        RunConfig c = config("loop3.json", 4);
        c.format = f;
        EXPECT_EQ(cmd_expand(c).out, cmd_expand(c).out);
        EXPECT_EQ(cmd_a_series(c).out, cmd_a_series(c).out);
    }
}
