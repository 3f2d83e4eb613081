#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace fsketch {

/// Capacity-k set of (key, value) pairs: per key the minimum value seen, and of
/// those the k smallest.
///
/// Values are totally ordered by (value, tie_hash(key), key). The tie hash makes
/// the retained set independent of processing order even when values collide,
/// so merge results do not depend on how the input was partitioned.
class BottomK {
 public:
  struct Entry {
    std::string key;
    double value;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  /// Throws invalid-parameter when k == 0.
  explicit BottomK(std::size_t k);

  BottomK(const BottomK& other);
  BottomK& operator=(const BottomK& other);
  BottomK(BottomK&&) noexcept = default;
  BottomK& operator=(BottomK&&) noexcept = default;

  std::size_t capacity() const noexcept { return k_; }
  std::size_t size() const noexcept { return slots_.size(); }
  bool empty() const noexcept { return slots_.empty(); }
  bool full() const noexcept { return slots_.size() >= k_; }

  /// Applies the element; returns whether the structure changed.
  bool process(const std::string& key, double value);

  /// True iff process(key, value) would change the structure.
  bool would_modify(const std::string& key, double value) const;

  /// Upper bound on the values that can still be admitted for `key`: the stored
  /// value if present, otherwise the current maximum when full, otherwise +inf.
  /// A value strictly above the bound never modifies the structure.
  double admission_bound(const std::string& key) const;

  std::optional<double> find(const std::string& key) const;
  bool contains(const std::string& key) const { return slots_.count(key) != 0; }
  bool erase(const std::string& key);

  /// Largest retained value (+inf when empty).
  double max_value() const noexcept;
  /// The eviction threshold: max_value() when full, +inf otherwise.
  double threshold() const noexcept { return full() ? max_value() : kInf; }

  /// Removes the entry with the largest rank. No-op when empty.
  void pop_max();

  /// Bottom-k merge; throws incompatible-sketch when capacities differ.
  void merge(const BottomK& other);

  /// Entries ascending by rank.
  std::vector<Entry> sorted_entries() const;

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (const auto& [key, slot] : slots_) fn(key, slot.value);
  }

  /// Same keys and values, regardless of internal layout.
  friend bool operator==(const BottomK& a, const BottomK& b);

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  struct Slot {
    double value;
    std::uint64_t tie;
  };
  struct Rank {
    double value;
    std::uint64_t tie;
    const std::string* key;
  };
  struct RankLess {
    bool operator()(const Rank& a, const Rank& b) const noexcept {
      if (a.value != b.value) return a.value < b.value;
      if (a.tie != b.tie) return a.tie < b.tie;
      return *a.key < *b.key;
    }
  };
  using SlotMap = std::unordered_map<std::string, Slot>;

  bool insert_new(const std::string& key, double value, std::uint64_t tie);
  bool lower(SlotMap::iterator it, double value);
  void rebuild_order();

  std::size_t k_;
  SlotMap slots_;
  std::set<Rank, RankLess> order_;
};

}  // namespace fsketch
