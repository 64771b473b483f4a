#pragma once

// Extension steps on sign conditions and the staged construction of a
// perfect family with full support.

#include "orthofam/fullsupport/sign_condition.hpp"
#include "orthofam/sequences/handle.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace orthofam {

/// Appends one column making the full inner sum of rows i and j zero, then
/// records ({i,j}, N+1, eps). With b = current sum: row i gets b, row j gets
/// -1 and every other row gets tau, the largest power of 1/2 with
/// tau * max(1, |b|) below every other requirement's slack. When b = 0 all
/// rows get tau, with tau^2 < eps as well.
inline SignCondition require_pair(SignCondition c, std::size_t i, std::size_t j, const BigRat& eps) {
  if (i == j || i >= c.h() || j >= c.h()) throw DomainError("require_pair needs two distinct rows");
  if (eps <= 0) throw DomainError("eps must be positive");
  if (i > j) std::swap(i, j);
  const BigRat b = c.gram(i, j);
  std::vector<BigRat> col;
  if (b != 0) {
    const auto slack = c.min_slack(std::make_pair(i, j));
    const BigRat scale = std::max(BigRat(1), abs_rat(b));
    const BigRat tau = largest_power_of_half([&](const BigRat& t) { return !slack || t * scale < *slack; });
    col.assign(c.h(), tau);
    col[i] = b;
    col[j] = -1;
  } else {
    const auto slack = c.min_slack();
    const BigRat tau = largest_power_of_half([&](const BigRat& t) { return (!slack || t < *slack) && t * t < eps; });
    col.assign(c.h(), tau);
  }
  c.append_column(std::move(col));
  c.add_requirement(i, j, eps);
  return c;
}

struct PadResult {
  SignCondition condition;
  BigRat delta;
  BigRat eps;
  BigInt repeats;
};

/// Appends M copies of eps times the h-row Hadamard block, eps = delta/2^h,
/// delta the largest power of 1/2 with delta^2 below every slack, and M
/// minimal with M 2^h eps^l > 1.
inline PadResult pad_block(SignCondition c, unsigned l) {
  if (l < 1) throw DomainError("pad_block needs l >= 1");
  const auto slack = c.min_slack();
  const BigRat delta = largest_power_of_half([&](const BigRat& d) { return !slack || d * d < *slack; });
  const unsigned h = static_cast<unsigned>(c.h());
  const BigRat eps = delta / BigRat(pow2(h));
  const BigRat per = BigRat(pow2(h)) * pow_rat(eps, l);  // M * per > 1
  const BigInt repeats = floor_rat(BigRat(1) / per) + 1;
  PadSegment p;
  p.bits = h;
  p.eps = eps;
  p.repeats = repeats;
  for (unsigned i = 0; i < h; ++i) p.bit_of_row.push_back(i);
  c.append_pad(std::move(p));
  return {std::move(c), delta, eps, repeats};
}

inline SignCondition double_condition(const SignCondition& c) { return c.doubled(); }

struct StageRecord {
  unsigned stage = 0;
  std::size_t h = 0;          ///< rows during the stage (before doubling)
  BigInt require_begin;       ///< first column added by the pair requirements
  BigInt pad_begin;           ///< first padded column
  BigInt pad_end;             ///< N after padding, i.e. the prefix length of the stage's rows
  BigRat eps_req;             ///< 1/stage
  BigRat delta;
  BigRat pad_eps;
  BigInt repeats;
};

struct FullSupportBuild {
  std::size_t h0 = 0;
  std::vector<std::vector<BigRat>> seed;
  unsigned stages = 0;
  std::vector<StageRecord> records;
  SignCondition condition;  ///< after the last doubling
};

inline std::vector<std::vector<BigRat>> default_seed(std::size_t h0) {
  std::vector<std::vector<BigRat>> rows;
  for (std::size_t i = 0; i < h0; ++i) rows.push_back({BigRat(static_cast<long>(i) + 1)});
  return rows;
}

/// Stage n = 1..S: require every pair with eps = 1/n, pad with l = n, double.
inline FullSupportBuild build_perfect_family(std::size_t h0, std::vector<std::vector<BigRat>> seed, unsigned stages) {
  if (seed.size() != h0) throw DomainError("seed must have h0 rows");
  FullSupportBuild b;
  b.h0 = h0;
  b.seed = seed;
  b.stages = stages;
  SignCondition c(seed);
  for (unsigned n = 1; n <= stages; ++n) {
    StageRecord rec;
    rec.stage = n;
    rec.h = c.h();
    rec.require_begin = c.N();
    rec.eps_req = make_rat(1, n);
    for (std::size_t i = 0; i < c.h(); ++i)
      for (std::size_t j = i + 1; j < c.h(); ++j) c = require_pair(std::move(c), i, j, rec.eps_req);
    rec.pad_begin = c.N();
    PadResult p = pad_block(std::move(c), n);
    c = std::move(p.condition);
    rec.pad_end = c.N();
    rec.delta = p.delta;
    rec.pad_eps = p.eps;
    rec.repeats = p.repeats;
    b.records.push_back(rec);
    c = double_condition(c);
  }
  b.condition = std::move(c);
  return b;
}

struct HeightSeries {
  unsigned p = 0;
  BigRat sum;          ///< sum over all columns of (min_i |s_i(n)|)^p
  BigRat lower_bound;  ///< #{l : p <= l <= S}
  std::vector<std::pair<unsigned, BigRat>> stage_contributions;  ///< padded range of stage l alone
  bool holds = false;
};

inline HeightSeries height_series(const FullSupportBuild& b, unsigned p) {
  if (p < 1) throw DomainError("height series needs p >= 1");
  HeightSeries hs;
  hs.p = p;
  hs.sum = 0;
  for (const auto& s : b.condition.segments()) {
    if (const auto* e = std::get_if<ExplicitColumn>(&s)) {
      BigRat m = abs_rat(e->entries[0]);
      for (const auto& v : e->entries) m = std::min(m, abs_rat(v));
      hs.sum += pow_rat(m, p);
    } else {
      const auto& pad = std::get<PadSegment>(s);
      hs.sum += BigRat(pad.columns()) * pow_rat(pad.eps, p);
    }
  }
  long qualifying = 0;
  for (const auto& rec : b.records) {
    const BigRat part = BigRat(rec.pad_end - rec.pad_begin) * pow_rat(rec.pad_eps, p);
    hs.stage_contributions.emplace_back(rec.stage, part);
    if (p <= rec.stage) ++qualifying;
  }
  hs.lower_bound = qualifying;
  hs.holds = hs.sum >= hs.lower_bound;
  return hs;
}

/// Row r of the final condition as a sequence handle over its N columns.
inline SeqHandle fullsupport_row_handle(const std::shared_ptr<const FullSupportBuild>& b, std::size_t row,
                                        std::string id) {
  if (row >= b->condition.h()) throw DomainError("row out of range");
  SeqHandle h;
  h.id = std::move(id);
  h.value = [b, row](Index n) { return Radical(b->condition.entry(row, BigInt(static_cast<unsigned long>(n)))); };
  h.support = FullSupport{};
  return h;
}

}  // namespace orthofam
