#include <doctest.h>

#include <random>
#include <sstream>

#include "hdvgrid/lp.hpp"
#include "support.hpp"

using namespace hdvgrid;
using testsupport::TempDir;

namespace {

// min -3x - 2y  s.t.  x + y <= 4,  x + 3y <= 9,  0 <= x <= 3,  y >= 0
ModelIR hand_lp() {
  ModelIR ir;
  const int x = ir.add_variable("x", 0.0, 3.0, -3.0);
  const int y = ir.add_variable("y", 0.0, kInf, -2.0);
  const int r1 = ir.add_constraint("cap", Sense::LessEqual, 4.0);
  ir.add_coefficient(r1, x, 1.0);
  ir.add_coefficient(r1, y, 1.0);
  const int r2 = ir.add_constraint("mix", Sense::LessEqual, 9.0);
  ir.add_coefficient(r2, x, 1.0);
  ir.add_coefficient(r2, y, 3.0);
  return ir;
}

}  // namespace

TEST_CASE("hand-solved LP: primal, duals and reduced costs") {
  const ModelIR ir = hand_lp();
  const SolutionView sol = solve(ir);
  REQUIRE(sol.optimal());
  CHECK(sol.objective == doctest::Approx(-11.0));
  CHECK(sol.value("x") == doctest::Approx(3.0));
  CHECK(sol.value("y") == doctest::Approx(1.0));
  CHECK(sol.dual("cap") == doctest::Approx(-2.0));
  CHECK(sol.dual("mix") == doctest::Approx(0.0));
  CHECK(sol.reduced_costs[0] == doctest::Approx(-1.0));
  CHECK(sol.reduced_costs[1] == doctest::Approx(0.0));
  CHECK(check_kkt(ir, sol).within(1e-9));
  CHECK_THROWS_AS(sol.value("z"), std::out_of_range);
}

TEST_CASE("duals are objective sensitivities to the right-hand side") {
  ModelIR ir = hand_lp();
  const double base = solve(ir).objective;
  ir.constraint(0).rhs += 0.5;
  CHECK(solve(ir).objective - base == doctest::Approx(-2.0 * 0.5));
}

TEST_CASE("equality rows and free variables") {
  // min x + 2y  s.t.  x + y = 3,  x <= 2,  y >= 0
  ModelIR eq;
  const int x = eq.add_variable("x", -kInf, 2.0, 1.0);
  const int y = eq.add_variable("y", 0.0, kInf, 2.0);
  const int r = eq.add_constraint("sum", Sense::Equal, 3.0);
  eq.add_coefficient(r, x, 1.0);
  eq.add_coefficient(r, y, 1.0);
  const SolutionView s = solve(eq);
  REQUIRE(s.optimal());
  CHECK(s.objective == doctest::Approx(4.0));
  CHECK(s.value("x") == doctest::Approx(2.0));
  CHECK(s.dual("sum") == doctest::Approx(2.0));

  // min t  s.t.  t >= x - 2,  t >= 2 - x,  x and t free
  ModelIR abs;
  const int t = abs.add_variable("t", -kInf, kInf, 1.0);
  const int u = abs.add_variable("u", -kInf, kInf, 0.0);
  const int a = abs.add_constraint("a", Sense::GreaterEqual, -2.0);
  abs.add_coefficient(a, t, 1.0);
  abs.add_coefficient(a, u, -1.0);
  const int b = abs.add_constraint("b", Sense::GreaterEqual, 2.0);
  abs.add_coefficient(b, t, 1.0);
  abs.add_coefficient(b, u, 1.0);
  const SolutionView f = solve(abs);
  REQUIRE(f.optimal());
  CHECK(f.objective == doctest::Approx(0.0));
  CHECK(f.value("u") == doctest::Approx(2.0));
  CHECK(f.dual("a") >= -1e-12);
  CHECK(f.dual("b") >= -1e-12);
  CHECK(f.dual("a") + f.dual("b") == doctest::Approx(1.0));
}

TEST_CASE("infeasible and unbounded instances are reported") {
  ModelIR inf;
  const int x = inf.add_variable("x", 0.0, 1.0, 1.0);
  const int y = inf.add_variable("y", 0.0, 1.0, 1.0);
  const int r = inf.add_constraint("need", Sense::GreaterEqual, 5.0);
  inf.add_coefficient(r, x, 1.0);
  inf.add_coefficient(r, y, 1.0);
  const SolutionView si = solve(inf);
  CHECK(si.status == SolveStatus::Infeasible);
  CHECK(si.infeasibility == doctest::Approx(3.0));

  ModelIR unb;
  const int p = unb.add_variable("p", 0.0, kInf, -1.0);
  const int q = unb.add_variable("q", 0.0, kInf, 0.0);
  const int c = unb.add_constraint("c", Sense::LessEqual, 1.0);
  unb.add_coefficient(c, p, 1.0);
  unb.add_coefficient(c, q, -1.0);
  const SolutionView su = solve(unb);
  CHECK(su.status == SolveStatus::Unbounded);
  CHECK_FALSE(su.ray_tag.empty());
}

TEST_CASE("empty and bound-only models") {
  ModelIR ir;
  ir.add_variable("a", -1.0, 4.0, 2.0);
  ir.add_variable("b", -1.0, 4.0, -2.0);
  const SolutionView s = solve(ir);
  REQUIRE(s.optimal());
  CHECK(s.objective == doctest::Approx(-10.0));
  CHECK(s.value("a") == -1.0);
  CHECK(s.value("b") == 4.0);
}

TEST_CASE("random LPs match vertex enumeration") {
  std::mt19937_64 rng(4242);
  int mismatches = 0;
  for (int i = 0; i < 30; ++i) {
    const testsupport::DenseLp lp = testsupport::random_lp(rng, 6, 5, i % 7 == 3);
    const testsupport::VertexOptimum oracle = testsupport::enumerate_vertices(lp);
    const ModelIR ir = lp.to_ir();
    const SolutionView sol = solve(ir);
    if (oracle.feasible != sol.optimal()) {
      ++mismatches;
      continue;
    }
    if (!oracle.feasible) {
      CHECK(sol.status == SolveStatus::Infeasible);
      continue;
    }
    CHECK(sol.objective == doctest::Approx(oracle.objective).epsilon(1e-9));
    CHECK(check_kkt(ir, sol).within(1e-8));
  }
  CHECK(mismatches == 0);
}

TEST_CASE("model validation and lookup") {
  ModelIR ir = hand_lp();
  CHECK_NOTHROW(ir.validate());
  CHECK(ir.find_variable("y") == 1);
  CHECK(ir.find_constraint("mix") == 1);
  CHECK(ir.find_variable("nope") == -1);
  CHECK(ir.objective({1.0, 1.0}) == -5.0);
  CHECK(ir.activities({1.0, 1.0}) == std::vector<double>{2.0, 4.0});

  ModelIR dangling = hand_lp();
  dangling.add_coefficient(0, 7, 1.0);
  CHECK_THROWS_AS(dangling.validate(), ValidationError);
  ModelIR inverted = hand_lp();
  inverted.variable(0).lower = 5.0;
  CHECK_THROWS_AS(inverted.validate(), ValidationError);
  ModelIR nan = hand_lp();
  nan.constraint(1).rhs = std::nan("");
  CHECK_THROWS_AS(nan.validate(), ValidationError);
}

TEST_CASE("model and solution text formats round-trip") {
  ModelIR ir = hand_lp();
  ir.add_variable("free", -kInf, kInf, 0.0);
  std::stringstream ms;
  ir.write(ms);
  const ModelIR back = ModelIR::read(ms);
  REQUIRE(back.num_variables() == ir.num_variables());
  REQUIRE(back.num_constraints() == ir.num_constraints());
  REQUIRE(back.num_coefficients() == ir.num_coefficients());
  for (std::size_t j = 0; j < ir.num_variables(); ++j) {
    CHECK(back.variables()[j].tag == ir.variables()[j].tag);
    CHECK(back.variables()[j].lower == ir.variables()[j].lower);
    CHECK(back.variables()[j].upper == ir.variables()[j].upper);
    CHECK(back.variables()[j].cost == ir.variables()[j].cost);
  }
  for (std::size_t i = 0; i < ir.num_constraints(); ++i) {
    CHECK(back.constraints()[i].sense == ir.constraints()[i].sense);
    CHECK(back.constraints()[i].rhs == ir.constraints()[i].rhs);
  }

  const SolutionView sol = solve(ir);
  std::stringstream ss;
  sol.write(ss);
  const SolutionView sback = SolutionView::read(ss);
  CHECK(sback.status == sol.status);
  CHECK(sback.objective == sol.objective);
  CHECK(sback.x == sol.x);
  CHECK(sback.duals == sol.duals);
  CHECK(sback.var_tags == sol.var_tags);

  std::stringstream junk("HDVLP 1\nmaximize\n");
  CHECK_THROWS_AS(ModelIR::read(junk), ConfigError);
  for (SolveStatus s : {SolveStatus::Optimal, SolveStatus::Infeasible, SolveStatus::Unbounded,
                        SolveStatus::IterationLimit})
    CHECK(solve_status_from_string(to_string(s)) == s);
}

TEST_CASE("external solver drives the command-line tool") {
  TempDir dir("external");
  ExternalSolver ext(std::string(HDVGRID_CLI) + " solve", dir.path().string());
  const ModelIR ir = hand_lp();
  const SolutionView sol = ext.solve(ir, {});
  REQUIRE(sol.optimal());
  CHECK(sol.objective == doctest::Approx(-11.0));
  CHECK(sol.dual("cap") == doctest::Approx(-2.0));

  ModelIR inf;
  const int x = inf.add_variable("x", 0.0, 1.0, 1.0);
  const int r = inf.add_constraint("need", Sense::GreaterEqual, 5.0);
  inf.add_coefficient(r, x, 1.0);
  CHECK(ext.solve(inf, {}).status == SolveStatus::Infeasible);

  ExternalSolver broken("sh -c 'exit 3'", dir.path().string());
  CHECK_THROWS(broken.solve(ir, {}));
}
