#pragma once

#include <cstddef>

#include "rko/decoder.hpp"
#include "rko/search_context.hpp"
#include "rko/searchers.hpp"

namespace rko {

struct EnsembleOptions {
  std::size_t poolCapacity = kDefaultPoolCapacity;
  /// Single execution token passed round-robin every `quantum` decoder calls.
  /// With a decoder-call budget the whole run is then a function of the seed.
  bool deterministic = false;
  std::size_t quantum = 100;
};

/// Random-key optimizer driver: fills the elite pool with random solutions,
/// runs every searcher concurrently until the budget is spent and reports the
/// pool best. Throws DecoderFailure if any decode misbehaves and
/// std::invalid_argument on bad inputs.
RunReport runEnsemble(const Decoder& decoder, const SearcherList& searchers,
                      const RunBudget& budget, const EnsembleOptions& options = {});

}  // namespace rko
