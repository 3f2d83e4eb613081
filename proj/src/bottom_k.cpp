#include "fsketch/bottom_k.hpp"

#include "fsketch/error.hpp"
#include "fsketch/random.hpp"

namespace fsketch {

BottomK::BottomK(std::size_t k) : k_(k) {
  if (k == 0) throw Error(ErrorKind::kInvalidParameter, "bottom-k capacity must be at least 1");
  slots_.reserve(k + 1);
}

BottomK::BottomK(const BottomK& other) : k_(other.k_), slots_(other.slots_) { rebuild_order(); }

BottomK& BottomK::operator=(const BottomK& other) {
  if (this != &other) {
    k_ = other.k_;
    slots_ = other.slots_;
    rebuild_order();
  }
  return *this;
}

// order_ holds pointers into slots_ keys, which are not preserved by copying.
void BottomK::rebuild_order() {
  order_.clear();
  for (const auto& [key, slot] : slots_) order_.insert(Rank{slot.value, slot.tie, &key});
}

bool BottomK::insert_new(const std::string& key, double value, std::uint64_t tie) {
  if (full()) {
    const Rank candidate{value, tie, &key};
    auto last = std::prev(order_.end());
    if (!RankLess{}(candidate, *last)) return false;
    const std::string evicted = *last->key;
    order_.erase(last);
    slots_.erase(evicted);
  }
  auto [it, inserted] = slots_.emplace(key, Slot{value, tie});
  order_.insert(Rank{value, tie, &it->first});
  return true;
}

bool BottomK::lower(SlotMap::iterator it, double value) {
  if (!(value < it->second.value)) return false;
  order_.erase(Rank{it->second.value, it->second.tie, &it->first});
  it->second.value = value;
  order_.insert(Rank{value, it->second.tie, &it->first});
  return true;
}

bool BottomK::process(const std::string& key, double value) {
  if (auto it = slots_.find(key); it != slots_.end()) return lower(it, value);
  if (full()) {
    const double top = order_.rbegin()->value;
    if (value > top) return false;
  }
  return insert_new(key, value, tie_hash(key));
}

bool BottomK::would_modify(const std::string& key, double value) const {
  if (auto it = slots_.find(key); it != slots_.end()) return value < it->second.value;
  if (!full()) return true;
  const Rank& top = *order_.rbegin();
  if (value != top.value) return value < top.value;
  return RankLess{}(Rank{value, tie_hash(key), &key}, top);
}

double BottomK::admission_bound(const std::string& key) const {
  if (auto it = slots_.find(key); it != slots_.end()) return it->second.value;
  return threshold();
}

std::optional<double> BottomK::find(const std::string& key) const {
  if (auto it = slots_.find(key); it != slots_.end()) return it->second.value;
  return std::nullopt;
}

bool BottomK::erase(const std::string& key) {
  auto it = slots_.find(key);
  if (it == slots_.end()) return false;
  order_.erase(Rank{it->second.value, it->second.tie, &it->first});
  slots_.erase(it);
  return true;
}

double BottomK::max_value() const noexcept { return order_.empty() ? kInf : order_.rbegin()->value; }

void BottomK::pop_max() {
  if (order_.empty()) return;
  auto last = std::prev(order_.end());
  const std::string key = *last->key;
  order_.erase(last);
  slots_.erase(key);
}

void BottomK::merge(const BottomK& other) {
  if (other.k_ != k_) {
    throw Error(ErrorKind::kIncompatibleSketch, "cannot merge bottom-k structures of different capacity");
  }
  if (&other == this) return;
  for (const auto& [key, slot] : other.slots_) {
    if (auto it = slots_.find(key); it != slots_.end()) {
      lower(it, slot.value);
    } else {
      insert_new(key, slot.value, slot.tie);
    }
  }
}

std::vector<BottomK::Entry> BottomK::sorted_entries() const {
  std::vector<Entry> out;
  out.reserve(order_.size());
  for (const Rank& r : order_) out.push_back(Entry{*r.key, r.value});
  return out;
}

bool operator==(const BottomK& a, const BottomK& b) {
  if (a.k_ != b.k_ || a.slots_.size() != b.slots_.size()) return false;
  for (const auto& [key, slot] : a.slots_) {
    auto it = b.slots_.find(key);
    if (it == b.slots_.end() || it->second.value != slot.value) return false;
  }
  return true;
}

}  // namespace fsketch
