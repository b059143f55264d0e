#pragma once

#include <array>
#include <vector>

#include "ordmet/element.hpp"
#include "ordmet/sampling.hpp"

namespace ordmet::detail {

using Triple = std::array<Element, 3>;

/// Default edge elements plus the plan's edge elements of matching dimension.
std::vector<Element> edge_set(std::size_t dim, const SamplePlan& plan);

/// All edge triples followed by `plan.count` seeded triples. The random part
/// cycles through four shapes: unrelated, a <= b <= c, a <= b with c free,
/// and strictly increasing in every coordinate. Order premises are therefore
/// exercised rather than vacuously true.
std::vector<Triple> sample_triples(std::size_t dim, const SamplePlan& plan);

std::string triple_witness(const Triple& t);

}  // namespace ordmet::detail
