#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <vector>

#include "rdv/competition.hpp"
#include "test_util.hpp"

using namespace rdv;

TEST_CASE("rd_cost arithmetic") {
  RdCost c = rd_cost(0.5, 0.05, 2.0);
  REQUIRE(c.j == Catch::Approx(1.05));
  REQUIRE(rd_cost(3.0, 0.2, 0.0).j == Catch::Approx(0.2));
  REQUIRE(rd_cost(3.0, 0.0, 0.5).j == Catch::Approx(1.5));
  REQUIRE_THROWS_AS(rd_cost(-1.0, 0.1, 1.0), RangeError);
  REQUIRE_THROWS_AS(rd_cost(1.0, -0.1, 1.0), RangeError);
  REQUIRE_THROWS_AS(rd_cost(1.0, 0.1, -1.0), RangeError);
}

TEST_CASE("select_best takes the argmin with deterministic tie-breaks") {
  std::vector<CodingChoice> choices = {
      {32, 8, 1, false}, {32, 8, 2, false}, {32, 8, 3, false}};
  SECTION("plain argmin") {
    std::vector<RdCost> costs = {{1, 0, 4.0}, {1, 0, 3.5}, {1, 0, 3.8}};
    REQUIRE(select_best(choices, costs) == choices[1]);
  }
  SECTION("tie resolved by lower rate") {
    std::vector<RdCost> costs = {{1.0, 0, 4.0}, {1.0, 0, 3.5}, {0.8, 0, 3.5}};
    REQUIRE(select_best(choices, costs) == choices[2]);
  }
  SECTION("full tie resolved by choice order") {
    std::vector<RdCost> costs = {{1.0, 0, 3.5}, {1.0, 0, 3.5}, {1.0, 0, 3.5}};
    REQUIRE(select_best(choices, costs) == choices[0]);
  }
  SECTION("single candidate") {
    std::vector<CodingChoice> one = {choices[0]};
    std::vector<RdCost> costs = {{1, 0, 9.0}};
    REQUIRE(select_best(one, costs) == choices[0]);
  }
  SECTION("empty list") {
    REQUIRE_THROWS_AS(select_best({}, {}), ConfigError);
  }
}

namespace {

// Hand-built candidate tables (no real encodes): bits plus distortion pairs.
SequenceTable synthetic_table(const std::string& name,
                              std::vector<std::pair<std::uint64_t, double>> rd) {
  SequenceTable t;
  t.name = name;
  t.duration_seconds = 1.0;
  int q = 1;
  for (auto [bits, dist] : rd) {
    CandidateEval c;
    c.choice = {32, 8, q++, false};
    c.bits = bits;
    c.rate_bps = static_cast<double>(bits);
    c.ms_ssim = 1.0 - dist;
    c.ms_ssim_db = 0.0;
    t.candidates.push_back(c);
  }
  return t;
}

}  // namespace

TEST_CASE("fit_budget bisection picks the cheap candidate under a tight budget") {
  std::vector<SequenceTable> tables = {
      synthetic_table("one", {{1, 0.10}, {2, 0.05}})};
  CompetitionResult r = fit_budget(tables, 1);
  REQUIRE(tables[0].candidates[r.selections[0].candidate_index].bits == 1);
  CompetitionResult r2 = fit_budget(tables, 2);
  REQUIRE(tables[0].candidates[r2.selections[0].candidate_index].bits == 2);
}

TEST_CASE("generous budget hands every sequence its best quality") {
  std::vector<SequenceTable> tables = {
      synthetic_table("a", {{100, 0.10}, {200, 0.05}, {400, 0.02}}),
      synthetic_table("b", {{50, 0.20}, {90, 0.12}, {160, 0.07}})};
  CompetitionResult r = fit_budget(tables, 1000);
  REQUIRE(r.lambda == 0.0);
  REQUIRE(tables[0].candidates[r.selections[0].candidate_index].bits == 400);
  REQUIRE(tables[1].candidates[r.selections[1].candidate_index].bits == 160);
}

TEST_CASE("infeasible budget reports the minimum achievable") {
  std::vector<SequenceTable> tables = {
      synthetic_table("a", {{100, 0.1}, {200, 0.05}}),
      synthetic_table("b", {{60, 0.2}, {90, 0.1}})};
  try {
    fit_budget(tables, 100);
    FAIL("expected BudgetError");
  } catch (const BudgetError& e) {
    REQUIRE(e.min_achievable_bits == 160);
  }
}

TEST_CASE("total rate is non-increasing along a lambda grid") {
  std::vector<SequenceTable> tables = {
      synthetic_table("a", {{100, 0.30}, {220, 0.18}, {400, 0.08}, {900, 0.03}}),
      synthetic_table("b", {{80, 0.25}, {150, 0.16}, {390, 0.06}, {700, 0.02}}),
      synthetic_table("c", {{30, 0.40}, {90, 0.22}, {210, 0.12}, {500, 0.05}})};
  std::uint64_t prev = ~0ull;
  for (double lambda :
       {0.0, 1e-5, 1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 0.1, 1.0, 10.0}) {
    std::uint64_t total = 0;
    for (const SequenceTable& t : tables) {
      std::vector<CodingChoice> choices;
      std::vector<RdCost> costs;
      for (const CandidateEval& c : t.candidates) {
        choices.push_back(c.choice);
        costs.push_back(rd_cost(c.rate_bps, 1.0 - c.ms_ssim, lambda));
      }
      total += t.candidates[select_best_index(choices, costs)].bits;
    }
    REQUIRE(total <= prev);
    prev = total;
  }
}

TEST_CASE("greedy refill reaches brute-force utilization") {
  std::vector<SequenceTable> tables = {
      synthetic_table("a", {{100, 0.30}, {220, 0.18}, {400, 0.08}, {900, 0.03}}),
      synthetic_table("b", {{80, 0.25}, {150, 0.16}, {390, 0.06}, {700, 0.02}}),
      synthetic_table("c", {{30, 0.40}, {90, 0.22}, {210, 0.12}, {500, 0.05}})};
  std::uint64_t min_total = 100 + 80 + 30;
  std::uint64_t max_total = 900 + 700 + 500;
  for (double frac : {0.12, 0.2, 0.35, 0.5, 0.75, 0.95}) {
    std::uint64_t budget = min_total + static_cast<std::uint64_t>(
        frac * static_cast<double>(max_total - min_total));
    CompetitionResult r = fit_budget(tables, budget);
    REQUIRE(r.total_bits <= budget);

    // Exhaustive best achievable total within budget.
    std::uint64_t best = 0;
    for (const auto& ca : tables[0].candidates)
      for (const auto& cb : tables[1].candidates)
        for (const auto& cc : tables[2].candidates) {
          std::uint64_t total = ca.bits + cb.bits + cc.bits;
          if (total <= budget && total > best) best = total;
        }
    if (10 * best >= 9 * budget) {
      INFO("budget " << budget << " fit " << r.total_bits << " best " << best);
      REQUIRE(10 * r.total_bits >= 9 * budget);
    }
  }
}

TEST_CASE("candidate grid prunes gop above intra period") {
  CandidateGrid grid;
  grid.intra_periods = {32};
  grid.gop_sizes = {16, 1};
  grid.qualities = {5};
  grid.downsample = {false};
  std::vector<CodingChoice> choices = grid.choices();
  REQUIRE(choices.size() == 2);
  CandidateGrid tight;
  tight.intra_periods = {32};
  tight.gop_sizes = {1, 2, 4, 8, 16};
  tight.qualities = {1};
  tight.downsample = {false};
  REQUIRE(tight.choices().size() == 5);
}

TEST_CASE("evaluate_choice scores against the original input") {
  // Sequences below the 5-scale MS-SSIM floor cannot be competed.
  Sequence small = testutil::make_sequence(testutil::Content::Static, 48, 48, 3, 19);
  REQUIRE_THROWS_AS(evaluate_choice(small, {4, 2, 5, false}), DimensionError);

  Sequence seq = testutil::make_sequence(testutil::Content::Static, 256, 256, 2, 19);
  CandidateEval eval = evaluate_choice(seq, {32, 2, 5, false});
  REQUIRE(eval.bits > 0);
  // 2 frames at 25 fps last 0.08 s.
  REQUIRE(eval.rate_bps ==
          Catch::Approx(static_cast<double>(eval.bits) / 0.08));
  REQUIRE_FALSE(eval.stream.empty());
  REQUIRE(eval.ms_ssim > 0.9);
  REQUIRE(eval.ms_ssim <= 1.0);
  REQUIRE(eval.ms_ssim_db == Catch::Approx(ms_ssim_db(eval.ms_ssim)));
}
