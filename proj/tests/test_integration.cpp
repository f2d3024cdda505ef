// Cross-module flows: certified plans feeding the corner-inclusion algebra,
// the parameter formulas, and the representation builder.

#include "fdca/algebra.hpp"
#include "fdca/interp_params.hpp"
#include "fdca/popa_plan.hpp"
#include "fdca/rep_builder.hpp"

#include <gtest/gtest.h>

namespace fdca {
namespace {

TEST(Integration, PlanLevelsYieldCompatibleCornerInclusions) {
  const ConstructionPlan plan = build_plan(Rational(3), 4);
  for (const PlanLevel& lv : plan.levels) {
    const UnitalEmbedding emb = corner_inclusion(lv.k, lv.ell);
    const TraceCompatibilityReport rep = traces_compatible(emb, emb);
    EXPECT_TRUE(rep.compatible);
    EXPECT_EQ(rep.trace_pairs[0].first, 1 - lv.alpha);
    EXPECT_EQ(rep.trace_pairs[1].first, lv.alpha / lv.ell);
    EXPECT_TRUE(rfd_obstruction_check(emb, emb).compatible);
  }
}

TEST(Integration, TailTraceMultiplicativeOverPlanLevels) {
  const LevelSequence seq = build_plan(Rational(7, 2), 5).level_sequence();
  const std::size_t n = seq.size();
  for (std::size_t split = 1; split + 1 <= n; ++split)
    EXPECT_EQ(tail_trace(seq, 1, n),
              tail_trace(seq, 1, split) * tail_trace(seq, split + 1, n));
  // Complement weights shrink toward the full product and stay positive.
  Rational prev = 1;
  for (std::size_t m = 1; m <= n; ++m) {
    const Rational w = tail_trace(seq, 1, m);
    EXPECT_GT(w, 0);
    EXPECT_LT(w, prev);
    prev = w;
  }
}

TEST(Integration, PlanDecayCertificateFeedsEnclosures) {
  const ConstructionPlan plan = build_plan(Rational(2), 6);
  const LevelSequence seq = plan.level_sequence();
  const Enclosure s = factor_parameter_s(seq, plan.decay_p);
  const Enclosure t = factor_parameter_t(seq, plan.decay_p);
  const Enclosure fed = fed_product(seq, plan.decay_p);
  EXPECT_TRUE(s.contains(factor_parameter_s(seq).lo));
  EXPECT_TRUE(t.contains(factor_parameter_t(seq).lo));
  EXPECT_TRUE(fed.contains(fed_product(seq).lo));
  EXPECT_LE(s.lo, s.hi);
  // The certified per-level decay is exactly what the tail bound consumes.
  for (const PlanLevel& lv : plan.levels)
    EXPECT_LT(lv.alpha, pow2(-(lv.index + plan.decay_p)));
}

TEST(Integration, PlanCornersBuildBlockRepresentations) {
  // The first level of a plan gives the two-sided inclusion data; its
  // diagonal amalgam extends to honest block representations.
  const ConstructionPlan plan = build_plan(Rational(3), 1);
  const PlanLevel& lv = plan.levels[0];
  const UnitalEmbedding emb = corner_inclusion(lv.k, lv.ell);
  const CompressionResult squeezed = compress_to_abelian(emb, emb);
  const AmalgamSpec am = amalgam_from_embeddings(squeezed.left, squeezed.right);
  EXPECT_EQ(am.left_n, am.right_n);
  EXPECT_EQ(am.left_n, lv.k - lv.ell + 1);  // one scalar block + one corner atom
  const ExtensionResult ext =
      extend_representations(make_initial_state(am, 1, 1));
  EXPECT_TRUE(ext.report.pass());
  const std::vector<Rational> t = am.traces();
  for (std::size_t i = 0; i < am.blocks(); ++i)
    EXPECT_EQ(Rational(ext.report.image_ranks[i]),
              t[i] * (ext.report.current_dim + ext.report.extra_dim));
}

}  // namespace
}  // namespace fdca
