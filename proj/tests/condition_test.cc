// Copyright 2026 The BDCI Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bdci/condition.h"

#include <gtest/gtest.h>

#include <random>

#include "bdci/error.h"
#include "random_conditions.h"

namespace bdci {
namespace {

using R = EquivVerdict::Result;

Condition P(std::string_view text) { return ParseCondition(text); }

TEST(SerializeTest, SingleAtom) {
  Condition c({Atom::Unary(Shape::kGtConst, "port", Constant::Integer(1))});
  EXPECT_EQ(Serialize(c), "(> port 1)");
}

TEST(SerializeTest, EmptyIsTrue) { EXPECT_EQ(Serialize(Condition()), "true"); }

TEST(SerializeTest, LeftNestedConjunction) {
  Condition c({Atom::NotNull("data"), Atom::NotNull("file"),
               Atom::NotNull("key"),
               Atom::Unary(Shape::kEqConst, "line", Constant::Integer(46))});
  EXPECT_EQ(Serialize(c),
            "(and (and (and (not (= data 0)) (not (= file 0))) "
            "(not (= key 0))) (= line 46))");
}

TEST(SerializeTest, ShapesRenderAsSExpressions) {
  EXPECT_EQ(Serialize(Condition({Atom::OneOf(
                "return", {Constant::Integer(128), Constant::Integer(0)})})),
            "(or (= return 0) (= return 128))");
  EXPECT_EQ(Serialize(Condition({Atom::Binary(Shape::kVarGt, "return",
                                              "price")})),
            "(> return price)");
  EXPECT_EQ(Serialize(Condition({Atom::Unary(Shape::kNotEqConst, "x",
                                             Constant::Integer(4))})),
            "(not (= x 4))");
  EXPECT_EQ(Serialize(Condition({Atom::Unary(Shape::kLeConst, "x",
                                             Constant::Integer(-3))})),
            "(<= x -3)");
}

TEST(SerializeTest, FloatsKeepADecimalPoint) {
  EXPECT_EQ(Constant::Real(1000).ToString(), "1000.0");
  EXPECT_EQ(Constant::Real(0.5).ToString(), "0.5");
  EXPECT_EQ(Constant::Integer(7).ToString(), "7");
}

TEST(CanonicalTest, ReturnIsAlwaysOnTheLeft) {
  Atom a = Atom::Binary(Shape::kVarLt, "price", "return").Canonical();
  EXPECT_EQ(a.lhs, "return");
  EXPECT_EQ(a.shape, Shape::kVarGt);
  Atom b = Atom::Binary(Shape::kVarGe, "z", "a").Canonical();
  EXPECT_EQ(b.lhs, "a");
  EXPECT_EQ(b.shape, Shape::kVarLe);
}

TEST(CanonicalTest, NotEqualZeroFoldsToNotNull) {
  Condition c({Atom::Unary(Shape::kNotEqConst, "p", Constant::Integer(0)),
               Atom::NotNull("p")});
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.atoms()[0].shape, Shape::kNotNull);
}

TEST(CanonicalTest, AtomOrderIsVariableThenShapeThenConstants) {
  Condition c({Atom::Unary(Shape::kLeConst, "b", Constant::Integer(1)),
               Atom::Unary(Shape::kGeConst, "b", Constant::Integer(0)),
               Atom::Unary(Shape::kEqConst, "a", Constant::Integer(9))});
  EXPECT_EQ(Serialize(c), "(and (and (= a 9) (>= b 0)) (<= b 1))");
}

TEST(ParseTest, TrueIsEmpty) { EXPECT_TRUE(P("true").empty()); }

TEST(ParseTest, ToleratesFigureSpacing) {
  Condition c = P("(not ( = data 0))");
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.atoms()[0], Atom::NotNull("data"));
  EXPECT_EQ(P("  (and\n(> x 1)   (< x 5) ) "), P("(and (> x 1) (< x 5))"));
}

TEST(ParseTest, AndNeedsTwoOperands) {
  EXPECT_THROW(P("(and (= x 1))"), ParseError);
}

TEST(ParseTest, ErrorsCarryPosition) {
  try {
    P("(and (= x 1) (foo x 2))");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.column(), 15u);
    EXPECT_NE(std::string(e.what()).find("unknown operator"),
              std::string::npos);
  }
}

TEST(ParseTest, RejectsNonFlatOr) {
  EXPECT_THROW(P("(or (= x 1) (or (= x 2) (= x 3)))"), ParseError);
  EXPECT_THROW(P("(or (= x 1) (> x 2))"), ParseError);
  EXPECT_THROW(P("(or (= x 1) (= y 2))"), ParseError);
}

TEST(ParseTest, RejectsMalformedInput) {
  for (const char* bad : {"", "(", "(= x)", "(= x 1 2)", "(> 1 x)",
                          "(= x 1))", "(not (> x 1))", "false", "(= x 1e999)",
                          "(= x 99999999999999999999)"}) {
    EXPECT_THROW(P(bad), ParseError) << bad;
  }
}

TEST(ParseTest, FloatAndIntegerConstantsStayDistinct) {
  EXPECT_TRUE(P("(>= f 1.0)").atoms()[0].constants[0].is_float());
  EXPECT_FALSE(P("(>= f 1)").atoms()[0].constants[0].is_float());
}

TEST(GridTest, PortBoundaries) {
  auto grid = Grid(P("(> port 0)"), P("(> port 1)"));
  ASSERT_EQ(grid.size(), 1u);
  EXPECT_EQ(grid[0].values,
            (std::vector<long double>{-2, -1, 0, 1, 2, 3}));
}

TEST(GridTest, NoConstantsDefaultsToUnitRange) {
  auto grid = Grid(P("(= x y)"), Condition());
  ASSERT_EQ(grid.size(), 2u);
  // Two linked variables get one extra step on each side.
  EXPECT_EQ(grid[0].values, (std::vector<long double>{-2, -1, 0, 1, 2}));
  DecisionOptions options;
  options.kinds = {{"x", ValueKind::kInt}};
  Condition only_x({Atom::Candidate(Shape::kVarEq, "x", "x")});
  auto single = Grid(only_x, Condition(), options);
  EXPECT_EQ(single[0].values, (std::vector<long double>{-1, 0, 1}));
}

TEST(GridTest, FloatSingleConstant) {
  auto grid = Grid(P("(>= f 1000.0)"), Condition());
  ASSERT_EQ(grid.size(), 1u);
  EXPECT_TRUE(grid[0].is_float);
  EXPECT_EQ(grid[0].values, (std::vector<long double>{999, 1000, 1001}));
}

TEST(GridTest, FloatMidpoints) {
  auto grid = Grid(P("(and (>= f 1.0) (<= f 2.0))"), Condition());
  EXPECT_EQ(grid[0].values,
            (std::vector<long double>{0, 1, 1.5, 2, 3}));
}

TEST(GridTest, BoolAndPtrUseZeroOne) {
  DecisionOptions options;
  options.kinds = {{"b", ValueKind::kBool}, {"p", ValueKind::kPtr}};
  auto grid = Grid(P("(and (= b 1) (not (= p 0)))"), Condition(), options);
  ASSERT_EQ(grid.size(), 2u);
  EXPECT_EQ(grid[0].values, (std::vector<long double>{0, 1}));
  EXPECT_EQ(grid[1].values, (std::vector<long double>{0, 1}));
}

TEST(GridTest, MixedKindsAreATypeError) {
  try {
    Grid(P("(> x 1)"), P("(< x 2.5)"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kType);
  }
  try {
    Equivalent(P("(> x 1)"), P("(< x 2.5)"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kType);
  }
}

TEST(GridTest, TooManyVariablesIsABudgetError) {
  std::vector<Atom> chain;
  for (int i = 0; i < 9; ++i) {
    chain.push_back(Atom::Binary(Shape::kVarLt, "v" + std::to_string(i),
                                 "v" + std::to_string(i + 1)));
  }
  try {
    Grid(Condition(chain), Condition());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBudget);
  }
}

TEST(EquivalentTest, PortWitness) {
  EquivVerdict v = Equivalent(P("(> port 0)"), P("(> port 1)"));
  EXPECT_EQ(v.result, R::kNotEquivalent);
  ASSERT_TRUE(v.witness);
  EXPECT_EQ(v.witness->at("port"), 1);
}

TEST(EquivalentTest, IntegerTightening) {
  EquivVerdict v = Equivalent(P("(> port 0)"), P("(>= port 1)"));
  EXPECT_EQ(v.result, R::kEquivalent);
  EXPECT_FALSE(v.witness);
}

TEST(EquivalentTest, Interval) {
  EXPECT_EQ(Equivalent(P("(and (> x 0) (< x 5))"),
                       P("(and (>= x 1) (<= x 4))"))
                .result,
            R::kEquivalent);
}

TEST(EquivalentTest, UnsatisfiableSidesAreEquivalent) {
  EXPECT_EQ(Equivalent(P("(and (> x 3) (< x 2))"), P("(and (< y x) (> y x))"))
                .result,
            R::kEquivalent);
}

TEST(EquivalentTest, WitnessSpansIndependentVariables) {
  Condition a = P("(and (> x 0) (= y 1))");
  Condition b = P("(and (> x 5) (= y 2))");
  EquivVerdict v = Equivalent(a, b);
  ASSERT_EQ(v.result, R::kNotEquivalent);
  EXPECT_NE(a.Evaluate(*v.witness), b.Evaluate(*v.witness));
}

TEST(EquivalentTest, FloatStrictness) {
  EXPECT_EQ(Equivalent(P("(>= f 1.5)"), P("(> f 1.5)")).result,
            R::kNotEquivalent);
}

TEST(EntailsTest, Examples) {
  EXPECT_TRUE(Entails(P("(= x 3)"), P("(>= x 1)")));
  EntailVerdict v = CheckEntails(P("true"), P("(> x 0)"));
  EXPECT_FALSE(v.holds);
  ASSERT_TRUE(v.counterexample);
  EXPECT_EQ(v.counterexample->at("x"), 0);
  EXPECT_TRUE(Entails(P("(and (> return price) (> price 0))"),
                      P("(>= return price)")));
}

TEST(EntailsTest, VarChainsNeedIntermediateValues) {
  // x < y < z over integers forces z >= x + 2.
  Condition chain = P("(and (< x y) (< y z))");
  EXPECT_TRUE(Entails(P("(and (and (< x y) (< y z)) (= x 0))"),
                      P("(>= z 2)")));
  EXPECT_FALSE(Entails(chain, P("(= z y)")));
}

// Property tests.

std::vector<std::string> Vars(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(std::string(1, 'a' + i));
  return out;
}

TEST(ConditionPropertyTest, SerializeParseRoundTrip) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    Condition c = testing::RandomCondition(rng, Vars(1 + trial % 4), 6,
                                           -1000, 1000);
    EXPECT_EQ(ParseCondition(Serialize(c)), c) << Serialize(c);
  }
}

TEST(ConditionPropertyTest, AgreesWithBruteForceBox) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::string> vars = Vars(1 + trial % 3);
    Condition a = testing::RandomCondition(rng, vars, 5);
    Condition b = testing::RandomCondition(rng, vars, 5);
    bool brute = true;
    testing::ForEachBoxPoint(vars, -12, 12, [&](const Assignment& point) {
      if (a.Evaluate(point) != b.Evaluate(point)) brute = false;
    });
    EquivVerdict v = Equivalent(a, b);
    EXPECT_EQ(v.result == R::kEquivalent, brute)
        << Serialize(a) << " vs " << Serialize(b);
    if (v.witness) {
      EXPECT_NE(a.Evaluate(*v.witness), b.Evaluate(*v.witness));
    }
  }
}

TEST(ConditionPropertyTest, ReflexiveSymmetricTransitive) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::string> vars = Vars(1 + trial % 3);
    Condition a = testing::RandomCondition(rng, vars, 4);
    Condition b = testing::RandomCondition(rng, vars, 4);
    Condition c = testing::RandomCondition(rng, vars, 4);
    EXPECT_EQ(Equivalent(a, a).result, R::kEquivalent);
    EXPECT_TRUE(Entails(a, a));
    EXPECT_EQ(Equivalent(a, b).result, Equivalent(b, a).result);
    if (Entails(a, b) && Entails(b, c)) {
      EXPECT_TRUE(Entails(a, c));
    }
  }
}

// Questions too large for the grid fall back to bound propagation; both
// procedures must agree wherever the grid is affordable.
TEST(ConditionPropertyTest, PropagationMatchesGrid) {
  std::mt19937_64 rng(5);
  DecisionOptions tiny;
  tiny.grid_budget = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::string> vars = Vars(1 + trial % 4);
    Condition a = testing::RandomCondition(rng, vars, 5);
    Condition b = testing::RandomCondition(rng, vars, 3);
    EntailVerdict grid = CheckEntails(a, b);
    EntailVerdict fallback = CheckEntails(a, b, tiny);
    ASSERT_FALSE(grid.approximate);
    ASSERT_FALSE(fallback.approximate);
    EXPECT_EQ(grid.holds, fallback.holds)
        << Serialize(a) << " |= " << Serialize(b);
    if (fallback.counterexample) {
      EXPECT_TRUE(a.Evaluate(*fallback.counterexample));
      EXPECT_FALSE(b.Evaluate(*fallback.counterexample));
    }
    EXPECT_EQ(Equivalent(a, b).result, Equivalent(a, b, tiny).result);
  }
}

TEST(ConditionPropertyTest, FloatsOverBudgetAreApproximate) {
  DecisionOptions tiny;
  tiny.grid_budget = 0;
  EquivVerdict v = Equivalent(P("(>= f 1.0)"), P("(>= f 2.0)"), tiny);
  EXPECT_EQ(v.result, R::kApproximate);
  EXPECT_FALSE(v.syntactically_equal);
  EXPECT_TRUE(v.differs());
  EXPECT_EQ(Equivalent(P("(>= f 1.0)"), P("(>= f 1.0)"), tiny).result,
            R::kApproximate);
}

}  // namespace
}  // namespace bdci
