#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>

namespace rko {

/// Problem binding seen by the search layer: a deterministic map from a key
/// vector of fixed length to a scalar cost (penalties included). Must be
/// callable concurrently from several threads.
class Decoder {
 public:
  virtual ~Decoder() = default;

  virtual std::size_t dimension() const = 0;
  virtual double decode(std::span<const double> keys) const = 0;
};

/// Raised when a decoder throws or returns a non-finite cost during a run.
class DecoderFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rko
