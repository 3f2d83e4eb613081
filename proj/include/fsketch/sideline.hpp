#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace fsketch {

/// Buffer of generated upper-range elements ((key, replica), y) whose value is
/// still below the sketch threshold. Per (key, replica) it keeps the minimum
/// y; the maximum over all entries is available in O(1) so the owner can pop
/// everything at or above a shrinking threshold.
///
/// Each entry also carries the SumMax score h((key, replica)) / A(y) it would be
/// processed with, which the owner uses to prune entries that can no longer
/// change the SumMax sample.
class Sideline {
 public:
  struct Slot {
    std::uint32_t replica;
    double value;
    double score;
  };
  struct Item {
    std::string key;
    std::uint32_t replica;
    double value;
    double score;
  };
  /// Slots of one input key, sorted by replica.
  class Group {
   public:
    const Slot* find(std::uint32_t replica) const;
    const std::vector<Slot>& slots() const noexcept { return slots_; }

   private:
    friend class Sideline;
    std::vector<Slot> slots_;
  };

  Sideline() = default;
  Sideline(const Sideline& other);
  Sideline& operator=(const Sideline& other);
  Sideline(Sideline&&) noexcept = default;
  Sideline& operator=(Sideline&&) noexcept = default;

  std::size_t size() const noexcept { return order_.size(); }
  bool empty() const noexcept { return order_.empty(); }
  std::size_t distinct_keys() const noexcept { return groups_.size(); }

  /// nullptr when the key has no entries. Valid until an entry of the key is
  /// erased.
  const Group* group(const std::string& key) const;
  const Slot* find(const std::string& key, std::uint32_t replica) const;

  /// Inserts or overwrites the entry for (key, replica).
  void put(const std::string& key, std::uint32_t replica, double value, double score);
  /// Min-merges `value` into the entry; inserts when absent. Returns whether
  /// anything changed.
  bool offer(const std::string& key, std::uint32_t replica, double value, double score);
  bool erase(const std::string& key, std::uint32_t replica);

  /// Largest value (-inf when empty).
  double max_value() const noexcept;
  /// Removes and returns the entry with the largest value. Requires !empty().
  Item pop_max();

  /// Removes entries for which pred(key, slot) holds; returns how many.
  std::size_t remove_if(const std::function<bool(const std::string&, const Slot&)>& pred);

  /// Per-(key, replica) minimum of both buffers.
  void merge(const Sideline& other);

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (const auto& [key, g] : groups_)
      for (const Slot& s : g.slots_) fn(key, s);
  }

  /// Compares (key, replica, value) contents.
  friend bool operator==(const Sideline& a, const Sideline& b);

 private:
  struct Ordered {
    double value;
    const std::string* key;
    std::uint32_t replica;
  };
  struct OrderedLess {
    bool operator()(const Ordered& a, const Ordered& b) const noexcept {
      if (a.value != b.value) return a.value < b.value;
      if (*a.key != *b.key) return *a.key < *b.key;
      return a.replica < b.replica;
    }
  };
  using GroupMap = std::unordered_map<std::string, Group>;

  Slot* locate(GroupMap::iterator it, std::uint32_t replica);
  void rebuild_order();

  GroupMap groups_;
  std::set<Ordered, OrderedLess> order_;
};

}  // namespace fsketch
