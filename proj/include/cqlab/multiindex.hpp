#ifndef CQLAB_MULTIINDEX_HPP
#define CQLAB_MULTIINDEX_HPP

#include <string>
#include <vector>

#include "cqlab/vec.hpp"

namespace cqlab {

/// Factorization of the range dimension d into consecutive blocks.
struct MultiIndex {
  std::vector<std::size_t> parts;

  std::size_t total() const {
    std::size_t s = 0;
    for (auto p : parts) s += p;
    return s;
  }
  std::size_t blocks() const { return parts.size(); }
  std::size_t block_offset(std::size_t nu) const {
    std::size_t off = 0;
    for (std::size_t i = 0; i < nu; ++i) off += parts[i];
    return off;
  }
  bool operator==(const MultiIndex& o) const { return parts == o.parts; }

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < parts.size(); ++i)
      s += (i ? "," : "") + std::to_string(parts[i]);
    return s + ")";
  }
};

inline MultiIndex delta_p(std::size_t d) { return {{d}}; }
inline MultiIndex delta_q(std::size_t d) {
  return {std::vector<std::size_t>(d, 1)};
}

/// True iff fine splits each part of coarse into consecutive sub-parts.
inline bool refine(const MultiIndex& fine, const MultiIndex& coarse) {
  if (fine.total() != coarse.total()) return false;
  std::size_t i = 0;
  for (std::size_t part : coarse.parts) {
    std::size_t acc = 0;
    while (acc < part) {
      if (i >= fine.parts.size()) return false;
      acc += fine.parts[i++];
    }
    if (acc != part) return false;
  }
  return i == fine.parts.size();
}

/// blocks nu with lambda_nu != 0
inline std::vector<std::size_t> support(const MultiIndex& delta, const QVec& lambda) {
  std::vector<std::size_t> s;
  std::size_t off = 0;
  for (std::size_t nu = 0; nu < delta.parts.size(); ++nu) {
    bool nonzero = false;
    for (std::size_t k = 0; k < delta.parts[nu]; ++k)
      nonzero = nonzero || lambda[off + k] != 0;
    if (nonzero) s.push_back(nu);
    off += delta.parts[nu];
  }
  return s;
}

}  // namespace cqlab

#endif
