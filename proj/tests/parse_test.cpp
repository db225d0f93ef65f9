#include <gtest/gtest.h>

#include "machines.hpp"
#include "support.hpp"

namespace iopp {
namespace {

using testing::Rng;

constexpr Bound kInf = Bound::infinity();

const char* kThreshold = R"(# x >= 2
protocol threshold2
states: 1 2
inputs: x:1
outputs: 1=0 2=1
trans: 1 1 -> 1 2
trans: 2 1 -> 2 2
)";

TEST(ParseProtocol, Threshold) {
  const auto f = parse_protocol(kThreshold);
  const auto& p = f.protocol;
  EXPECT_EQ(p.name, "threshold2");
  EXPECT_EQ(p.scheme.states(), (std::vector<std::string>{"1", "2"}));
  EXPECT_EQ(p.inputs, (std::vector<InputBinding>{{"x", 0}}));
  EXPECT_EQ(p.output, (std::vector<int>{0, 1}));
  EXPECT_EQ(p.scheme.transitions(), (std::vector<Transition>{{0, 0, 0, 1}, {1, 0, 1, 1}}));
  EXPECT_FALSE(f.init_config);
}

ParseError parse_error(const std::string& text) {
  try {
    parse_protocol(text);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return ParseError(0, 0, "");
}

TEST(ParseProtocol, ErrorsCarryLocation) {
  auto e = parse_error("protocol p\nstates: a b\ninputs: x:a\noutputs: a=0 b=1\ntrans: a b -> a c\n");
  EXPECT_EQ(e.line(), 5u);
  EXPECT_EQ(e.column(), 17u);
  EXPECT_NE(e.message().find("undeclared state 'c'"), std::string::npos);

  e = parse_error("protocol p\nstates: a a\ninputs: x:a\noutputs: a=0\n");
  EXPECT_EQ(e.line(), 2u);
  EXPECT_NE(e.message().find("duplicate"), std::string::npos);

  e = parse_error("protocol p\nstates: a b\ninputs: x:a y:a\noutputs: a=0 b=1\n");
  EXPECT_NE(e.message().find("injective"), std::string::npos);

  e = parse_error("protocol p\nstates: a b\ninputs: x:a\noutputs: a=0\n");
  EXPECT_EQ(e.line(), 4u);
  EXPECT_NE(e.message().find("no output for state 'b'"), std::string::npos);

  e = parse_error("protocol p\nstates: a b\noutputs: a=0 b=1\n");
  EXPECT_EQ(e.line(), 3u);

  e = parse_error("protocol p\nstates: a b\ninputs: x:a\noutputs: a=0 b=2\n");
  EXPECT_NE(e.message().find("0 or 1"), std::string::npos);
}

TEST(ParseProtocol, InitConfigAndRoundTrip) {
  const auto f = parse_protocol(std::string(kThreshold) + "init-config: 1:3 2:1\n");
  ASSERT_TRUE(f.init_config);
  EXPECT_EQ(*f.init_config, (Point{3, 1}));
  const auto again = parse_protocol(print_protocol(f.protocol, f.init_config));
  EXPECT_EQ(again.protocol, f.protocol);
  EXPECT_EQ(again.init_config, f.init_config);
}

TEST(ParseProtocol, RandomRoundTrip) {
  Rng r(61);
  for (int iter = 0; iter < 50; ++iter) {
    const auto p = testing::random_protocol(r, 1 + r.below(4), 5, true);
    EXPECT_EQ(parse_protocol(print_protocol(p)).protocol, p);
    const auto n = normalize(p).protocol;
    EXPECT_EQ(parse_protocol(print_protocol(n)).protocol, n);
  }
}

TEST(ParseConstraint, Expressions) {
  const std::vector<std::string> vars{"x", "y"};
  const auto g = parse_constraint("(x>=1 & y<=3) | !(x=0)", vars);
  EXPECT_EQ(g.size(), 1u);
  for (const Point& v : testing::box_points(2, 6))
    EXPECT_EQ(g.contains(v), (v[0] >= 1 && v[1] <= 3) || v[0] != 0);
  EXPECT_TRUE(equivalent(parse_constraint("true", vars), CountingConstraint::full(2)));
  EXPECT_TRUE(is_empty(parse_constraint("false | x>=2 & x<=1", vars)));
  EXPECT_TRUE(equivalent(parse_constraint("!x>=2", vars), parse_constraint("x<=1", vars)));
}

TEST(ParseConstraint, Errors) {
  const std::vector<std::string> vars{"x"};
  EXPECT_THROW(parse_constraint("z>=1", vars), ParseError);
  EXPECT_THROW(parse_constraint("x>=", vars), ParseError);
  EXPECT_THROW(parse_constraint("(x>=1", vars), ParseError);
  EXPECT_THROW(parse_constraint("x>=1 y", vars), ParseError);
  try {
    parse_constraint("x>=1 & q<=2", vars);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.column(), 8u);
  }
}

TEST(ParseConstraint, PrintedExpressionRoundTrips) {
  Rng r(67);
  const std::vector<std::string> vars{"a", "b", "c"};
  for (int iter = 0; iter < 100; ++iter) {
    const auto g = canonicalize(testing::random_constraint(r, 3, 4));
    const auto back = parse_constraint(expression(g, vars), vars);
    EXPECT_TRUE(equivalent(back, g)) << expression(g, vars);
    EXPECT_EQ(parse_minterms(serialize(g), 3), g);
  }
}

TEST(ParseMinterms, Format) {
  const auto g = parse_minterms("0..inf 2..2\n# comment\n1..3 0..0\n", 2);
  EXPECT_TRUE(equivalent(g, CountingConstraint(2, {Minterm({0, 2}, {kInf, 2}), Minterm({1, 0}, {3, 0})})));
  EXPECT_THROW(parse_minterms("0..inf\n", 2), ParseError);
}

TEST(ParsePredicate, UsesInputVariables) {
  const auto p = parse_protocol(kThreshold).protocol;
  EXPECT_TRUE(equivalent(parse_predicate("x>=2", p), CountingConstraint::of(Minterm({2}, {kInf}))));
  EXPECT_THROW(parse_predicate("q>=2", p), ParseError);
}

TEST(ParseTm, RoundTrip) {
  for (const auto& tm : {testing::first_is_zero(), testing::two_cells(), testing::last_is_one()}) {
    const auto back = parse_tm(print_tm(tm));
    EXPECT_EQ(back, tm);
  }
}

TEST(ParseTm, Errors) {
  EXPECT_THROW(parse_tm(""), ParseError);
  EXPECT_THROW(parse_tm("tm m\ntmstates: s acc rej\ntape: 0\ninit: s\nacc: acc\n"), ParseError);
  EXPECT_THROW(parse_tm("tm m\ntmstates: s acc rej\ntape: 0\ninit: s\nacc: acc\nrej: rej\ndelta: s 0 -> acc 0 X\n"),
               ParseError);
  EXPECT_THROW(parse_tm("tm m\ntmstates: s acc rej\ntape: 0\ninit: s\nacc: acc\nrej: rej\n"
                        "delta: s 0 -> acc 0 R\ndelta: s 0 -> rej 0 R\n"),
               ParseError);
}

TEST(ParseWord, Splitting) {
  EXPECT_EQ(parse_word("01"), (std::vector<std::string>{"0", "1"}));
  EXPECT_EQ(parse_word("a bb  c"), (std::vector<std::string>{"a", "bb", "c"}));
  EXPECT_TRUE(parse_word("").empty());
}

TEST(Format, Verdicts) {
  PopulationProtocol p;
  p.scheme = ProtocolScheme({"a", "b"});
  p.inputs = {{"x", 0}, {"y", 1}};
  p.output = {0, 1};
  const auto v = well_specified(p);
  const auto n = normalize(p);
  EXPECT_EQ(verdict_text(v, p, n, false), "ILL-SPECIFIED (condition 1) witness a:1 b:1\n");
  const auto kv = verdict_kv(v, p, n, false);
  EXPECT_NE(kv.find("kind=ILL_SPECIFIED"), std::string::npos);
  EXPECT_NE(kv.find("violated_condition=cond1"), std::string::npos);
  EXPECT_NE(kv.find("witness=a:1 b:1"), std::string::npos);
}

}  // namespace
}  // namespace iopp
