#include "tta/dbm.hpp"

#include <algorithm>

namespace tta {

Dbm::Dbm(std::size_t clocks) : dim_(clocks + 1), m_(dim_ * dim_, kInfinity) {
  for (std::size_t i = 0; i < dim_; ++i) {
    ref(i, i) = kLeZero;
    ref(0, i) = kLeZero;  // 0 - x_i <= 0
  }
}

Dbm Dbm::zero(std::size_t clocks) {
  Dbm d(clocks);
  std::fill(d.m_.begin(), d.m_.end(), kLeZero);
  return d;
}

void Dbm::close() {
  for (std::size_t k = 0; k < dim_; ++k)
    for (std::size_t i = 0; i < dim_; ++i) {
      raw_t ik = at(i, k);
      if (ik == kInfinity) continue;
      for (std::size_t j = 0; j < dim_; ++j) {
        raw_t s = bound_add(ik, at(k, j));
        if (s < at(i, j)) ref(i, j) = s;
      }
    }
  for (std::size_t i = 0; i < dim_; ++i)
    if (at(i, i) < kLeZero) {
      empty_ = true;
      return;
    }
}

bool Dbm::constrain(std::size_t i, std::size_t j, raw_t b) {
  if (empty_) return false;
  if (b >= at(i, j)) return true;
  if (bound_add(b, at(j, i)) < kLeZero) {
    empty_ = true;
    return false;
  }
  ref(i, j) = b;
  for (std::size_t k = 0; k < dim_; ++k) {
    raw_t ki = at(k, i);
    if (ki == kInfinity) continue;
    raw_t kij = bound_add(ki, b);
    for (std::size_t l = 0; l < dim_; ++l) {
      raw_t s = bound_add(kij, at(j, l));
      if (s < at(k, l)) ref(k, l) = s;
    }
  }
  return true;
}

void Dbm::up() {
  if (empty_) return;
  for (std::size_t i = 1; i < dim_; ++i) ref(i, 0) = kInfinity;
}

void Dbm::reset(std::size_t x) {
  if (empty_) return;
  for (std::size_t j = 0; j < dim_; ++j) {
    ref(x, j) = at(0, j);
    ref(j, x) = at(j, 0);
  }
  ref(x, x) = kLeZero;
}

void Dbm::extrapolate(std::int64_t max_constant) {
  std::vector<std::int64_t> bounds(dim_, max_constant);
  bounds[0] = 0;
  extrapolate_lu(bounds, bounds);
}

void Dbm::extrapolate_lu(const std::vector<std::int64_t>& lower, const std::vector<std::int64_t>& upper) {
  if (empty_) return;
  // x_i is known to exceed its largest lower-bound constant
  std::vector<bool> above_l(dim_, false), above_u(dim_, false);
  for (std::size_t i = 1; i < dim_; ++i) {
    above_l[i] = at(0, i) < bound(-lower[i], false);
    above_u[i] = at(0, i) < bound(-upper[i], false);
  }
  std::vector<raw_t> next = m_;
  bool changed = false;
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) {
      if (i == j) continue;
      raw_t v = at(i, j);
      if (v == kInfinity) continue;
      raw_t nv = v;
      if (i != 0 && (v > bound(lower[i], false) || above_l[i])) nv = kInfinity;
      else if (j != 0 && above_u[j]) nv = i == 0 ? bound(-upper[j], true) : kInfinity;
      if (nv != v) {
        next[i * dim_ + j] = nv;
        changed = true;
      }
    }
  if (changed) {
    m_ = std::move(next);
    close();
  }
}

bool Dbm::includes(const Dbm& other) const {
  if (other.empty_) return true;
  if (empty_) return false;
  for (std::size_t k = 0; k < m_.size(); ++k)
    if (other.m_[k] > m_[k]) return false;
  return true;
}

std::size_t Dbm::hash() const {
  std::size_t h = dim_ * 0x9e3779b97f4a7c15ULL;
  for (raw_t v : m_) h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::string Dbm::str() const {
  if (empty_) return "empty";
  std::string s;
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      raw_t v = at(i, j);
      if (v == kInfinity) s += " inf";
      else s += std::string(" ") + (bound_strict(v) ? "<" : "<=") + std::to_string(bound_value(v));
    }
    s += "\n";
  }
  return s;
}

}  // namespace tta
