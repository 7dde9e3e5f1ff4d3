#pragma once

#include <stdexcept>

#include "alignkit/alignment.hpp"

namespace alignkit {

/// α-cut: keeps the cells with confidence >= alpha, in their original order.
/// Throws std::invalid_argument unless 0 <= alpha <= 1.
Alignment trim(const Alignment& a, double alpha);

enum class PassOrder { Entity1First, Entity2First };

/// Keeps, per entity1 group, every cell at the group's maximum confidence,
/// then repeats over the survivors grouped by entity2. Tied cells survive
/// both passes, so the result is 1-to-1 only when no ties are involved.
Alignment disambiguate_two_pass(const Alignment& a, PassOrder order = PassOrder::Entity1First);

enum class MaxWeightMode { Exact, Greedy };

/// Sub-alignment in which every entity occurs at most once and the total
/// confidence is maximal (Hungarian assignment). Greedy mode takes cells in
/// descending confidence instead and is not optimal. Zero-confidence cells
/// are kept when both of their entities are otherwise unmatched.
Alignment disambiguate_max_weight(const Alignment& a, MaxWeightMode mode = MaxWeightMode::Exact);

enum class SubsumptionDirection { SharedIsSuper, SharedIsSub };

/// Turns every ambiguous Equivalence cell into a subsumption. With
/// SharedIsSuper the entity shared by several cells becomes the broader one:
/// a shared entity1 yields Subsumes (e1 ⊒ e2), a shared entity2 SubsumedBy.
/// When both sides are shared, entity1 decides. A rewritten cell that
/// collides with an existing identity keeps the higher confidence.
Alignment rewrite_ambiguous_to_subsumption(
    const Alignment& a, SubsumptionDirection direction = SubsumptionDirection::SharedIsSuper);

/// Sum of confidences.
double total_confidence(const Alignment& a);

}  // namespace alignkit
