#pragma once

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "rdv/codec.hpp"
#include "rdv/errors.hpp"
#include "rdv/metrics.hpp"
#include "rdv/parallel.hpp"

namespace rdv {

// Candidate option sets swept by the competition.
inline const std::vector<int>& competition_intra_periods() {
  static const std::vector<int> v = {32, 64, 128, 320};
  return v;
}
inline const std::vector<int>& competition_gop_sizes() {
  static const std::vector<int> v = {1, 2, 4, 8, 16};
  return v;
}
inline const std::vector<int>& competition_qualities() {
  static const std::vector<int> v = {1, 2, 3, 4, 5, 6, 7, 8};
  return v;
}

struct CandidateGrid {
  std::vector<int> intra_periods = competition_intra_periods();
  std::vector<int> gop_sizes = competition_gop_sizes();
  std::vector<int> qualities = competition_qualities();
  std::vector<bool> downsample = {false, true};

  // Cross product pruned by gop <= intra period, in deterministic order.
  std::vector<CodingChoice> choices() const {
    std::vector<CodingChoice> out;
    for (int ip : intra_periods)
      for (int gop : gop_sizes) {
        if (gop > ip) continue;
        for (int q : qualities)
          for (bool ds : downsample) out.push_back({ip, gop, q, ds});
      }
    return out;
  }
};

struct RdCost {
  double rate = 0.0;        // bits per second
  double distortion = 0.0;  // 1 - MS-SSIM
  double j = 0.0;
};

inline RdCost rd_cost(double rate, double distortion, double lambda) {
  if (rate < 0.0 || distortion < 0.0 || lambda < 0.0)
    throw RangeError("rd_cost arguments must be non-negative");
  return {rate, distortion, distortion + lambda * rate};
}

// Everything measured for one (sequence, choice) pair.
struct CandidateEval {
  CodingChoice choice;
  std::uint64_t bits = 0;
  double rate_bps = 0.0;
  double ms_ssim = 0.0;
  double ms_ssim_db = 0.0;
  double psnr = 0.0;
  std::vector<std::uint8_t> stream;
};

// Encodes once with the given choice, decoding back to original resolution,
// and scores against the untouched input.
inline CandidateEval evaluate_choice(const Sequence& seq, const CodingChoice& c,
                                     bool keep_stream = true) {
  SequenceEncodeResult enc = encode_sequence(seq, c);
  CandidateEval eval;
  eval.choice = c;
  eval.bits = enc.total_bits;
  double duration = seq.duration_seconds();
  eval.rate_bps = duration > 0.0 ? static_cast<double>(enc.total_bits) / duration : 0.0;
  eval.ms_ssim = ms_ssim(seq, enc.recon);
  eval.ms_ssim_db = ms_ssim_db(eval.ms_ssim);
  eval.psnr = psnr(seq, enc.recon);
  if (keep_stream) eval.stream = std::move(enc.stream);
  return eval;
}

// Full candidate table for one sequence.
struct SequenceTable {
  std::string name;
  double duration_seconds = 0.0;
  std::vector<CandidateEval> candidates;
};

// argmin of j; ties fall to the lower rate, then to the smaller choice tuple.
inline std::size_t select_best_index(const std::vector<CodingChoice>& choices,
                                     const std::vector<RdCost>& costs) {
  if (choices.empty() || choices.size() != costs.size())
    throw ConfigError("select_best needs a non-empty candidate list");
  std::size_t best = 0;
  for (std::size_t i = 1; i < costs.size(); ++i) {
    if (costs[i].j < costs[best].j ||
        (costs[i].j == costs[best].j &&
         (costs[i].rate < costs[best].rate ||
          (costs[i].rate == costs[best].rate && choices[i] < choices[best]))))
      best = i;
  }
  return best;
}

inline CodingChoice select_best(const std::vector<CodingChoice>& choices,
                                const std::vector<RdCost>& costs) {
  return choices[select_best_index(choices, costs)];
}

struct SequenceSelection {
  std::size_t candidate_index = 0;
  RdCost cost;
};

struct CompetitionResult {
  double lambda = 0.0;
  std::uint64_t budget_bits = 0;
  std::uint64_t total_bits = 0;
  std::vector<SequenceSelection> selections;  // one per sequence table
};

namespace detail {

inline SequenceSelection select_for_lambda(const SequenceTable& table,
                                           double lambda) {
  std::vector<CodingChoice> choices;
  std::vector<RdCost> costs;
  choices.reserve(table.candidates.size());
  costs.reserve(table.candidates.size());
  for (const CandidateEval& c : table.candidates) {
    choices.push_back(c.choice);
    costs.push_back(rd_cost(c.rate_bps, 1.0 - c.ms_ssim, lambda));
  }
  std::size_t idx = select_best_index(choices, costs);
  return {idx, costs[idx]};
}

inline std::uint64_t total_bits_at(const std::vector<SequenceTable>& tables,
                                   double lambda,
                                   std::vector<SequenceSelection>* out) {
  std::uint64_t total = 0;
  if (out) out->clear();
  for (const SequenceTable& t : tables) {
    SequenceSelection s = select_for_lambda(t, lambda);
    total += t.candidates[s.candidate_index].bits;
    if (out) out->push_back(s);
  }
  return total;
}

}  // namespace detail

// Fits a dataset-wide bit budget: bisects the global lambda down to the
// smallest value whose per-sequence argmin selections fit, then greedily
// upgrades sequences (best distortion gain per extra bit first) while
// headroom remains. Deterministic for a fixed input.
inline CompetitionResult fit_budget(const std::vector<SequenceTable>& tables,
                                    std::uint64_t budget_bits) {
  if (tables.empty()) throw ConfigError("no sequences to allocate");
  for (const SequenceTable& t : tables)
    if (t.candidates.empty())
      throw ConfigError("sequence " + t.name + " has no candidates");

  std::uint64_t min_total = 0;
  for (const SequenceTable& t : tables) {
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    for (const CandidateEval& c : t.candidates) best = std::min(best, c.bits);
    min_total += best;
  }
  if (budget_bits < min_total)
    throw BudgetError("budget below minimum achievable total of " +
                          std::to_string(min_total) + " bits",
                      min_total);

  CompetitionResult result;
  result.budget_bits = budget_bits;

  // lambda = 0 is the pure-quality regime; take it outright when it fits.
  std::vector<SequenceSelection> selections;
  std::uint64_t total = detail::total_bits_at(tables, 0.0, &selections);
  double lambda = 0.0;
  if (total > budget_bits) {
    double lo = 0.0, hi = 1.0;
    while (detail::total_bits_at(tables, hi, nullptr) > budget_bits) {
      hi *= 2.0;
      if (hi > 1e30) throw ConfigError("budget bisection failed to bracket");
    }
    for (int iter = 0; iter < 200; ++iter) {
      double mid = 0.5 * (lo + hi);
      if (detail::total_bits_at(tables, mid, nullptr) > budget_bits)
        lo = mid;
      else
        hi = mid;
    }
    lambda = hi;
    total = detail::total_bits_at(tables, lambda, &selections);
  }

  // Greedy refill: discrete selections generically undershoot the budget.
  while (true) {
    double best_gain = 0.0;
    std::size_t best_seq = 0, best_cand = 0;
    bool found = false;
    for (std::size_t s = 0; s < tables.size(); ++s) {
      const SequenceTable& t = tables[s];
      const CandidateEval& cur = t.candidates[selections[s].candidate_index];
      for (std::size_t c = 0; c < t.candidates.size(); ++c) {
        const CandidateEval& cand = t.candidates[c];
        if (cand.bits <= cur.bits || cand.ms_ssim <= cur.ms_ssim) continue;
        if (total - cur.bits + cand.bits > budget_bits) continue;
        double gain = (cand.ms_ssim - cur.ms_ssim) /
                      static_cast<double>(cand.bits - cur.bits);
        if (!found || gain > best_gain) {
          found = true;
          best_gain = gain;
          best_seq = s;
          best_cand = c;
        }
      }
    }
    if (!found) break;
    const SequenceTable& t = tables[best_seq];
    total -= t.candidates[selections[best_seq].candidate_index].bits;
    total += t.candidates[best_cand].bits;
    selections[best_seq].candidate_index = best_cand;
  }

  for (std::size_t s = 0; s < tables.size(); ++s) {
    const CandidateEval& c = tables[s].candidates[selections[s].candidate_index];
    selections[s].cost = rd_cost(c.rate_bps, 1.0 - c.ms_ssim, lambda);
  }
  result.lambda = lambda;
  result.total_bits = total;
  result.selections = selections;
  return result;
}

// Evaluates the whole grid for every sequence on a bounded worker pool.
// Streams are dropped after measurement; the chosen candidates are re-encoded
// by the caller when files are wanted (encodes are deterministic).
inline std::vector<SequenceTable> build_tables(
    const std::vector<Sequence>& sequences,
    const std::vector<CodingChoice>& choices, int jobs) {
  if (sequences.empty()) throw ConfigError("no input sequences");
  if (choices.empty()) throw ConfigError("empty candidate grid");
  std::vector<SequenceTable> tables(sequences.size());
  for (std::size_t s = 0; s < sequences.size(); ++s) {
    tables[s].name = sequences[s].name;
    tables[s].duration_seconds = sequences[s].duration_seconds();
    tables[s].candidates.resize(choices.size());
  }
  std::size_t total = sequences.size() * choices.size();
  parallel_for_index(total, jobs, [&](std::size_t i) {
    std::size_t s = i / choices.size();
    std::size_t c = i % choices.size();
    tables[s].candidates[c] =
        evaluate_choice(sequences[s], choices[c], /*keep_stream=*/false);
  });
  return tables;
}

// Candidate table CSV: the persisted contract consumed by `report`.
inline void write_candidates_csv(const std::vector<SequenceTable>& tables,
                                 std::ostream& out) {
  out << "sequence,intra_period,gop_size,quality,downsample,bits,ms_ssim,ms_ssim_db\n";
  out << std::setprecision(17);
  for (const SequenceTable& t : tables)
    for (const CandidateEval& c : t.candidates)
      out << t.name << ',' << c.choice.intra_period << ',' << c.choice.gop_size
          << ',' << c.choice.quality << ',' << (c.choice.downsample ? 1 : 0)
          << ',' << c.bits << ',' << c.ms_ssim << ',' << c.ms_ssim_db << '\n';
}

}  // namespace rdv
