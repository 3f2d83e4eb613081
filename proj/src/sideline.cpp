#include "fsketch/sideline.hpp"

#include <algorithm>

namespace fsketch {

namespace {

auto replica_less = [](const Sideline::Slot& s, std::uint32_t replica) { return s.replica < replica; };

}  // namespace

const Sideline::Slot* Sideline::Group::find(std::uint32_t replica) const {
  auto it = std::lower_bound(slots_.begin(), slots_.end(), replica, replica_less);
  return (it != slots_.end() && it->replica == replica) ? &*it : nullptr;
}

Sideline::Sideline(const Sideline& other) : groups_(other.groups_) { rebuild_order(); }

Sideline& Sideline::operator=(const Sideline& other) {
  if (this != &other) {
    groups_ = other.groups_;
    rebuild_order();
  }
  return *this;
}

void Sideline::rebuild_order() {
  order_.clear();
  for (const auto& [key, g] : groups_)
    for (const Slot& s : g.slots_) order_.insert(Ordered{s.value, &key, s.replica});
}

const Sideline::Group* Sideline::group(const std::string& key) const {
  auto it = groups_.find(key);
  return it == groups_.end() ? nullptr : &it->second;
}

const Sideline::Slot* Sideline::find(const std::string& key, std::uint32_t replica) const {
  const Group* g = group(key);
  return g ? g->find(replica) : nullptr;
}

Sideline::Slot* Sideline::locate(GroupMap::iterator it, std::uint32_t replica) {
  auto& slots = it->second.slots_;
  auto pos = std::lower_bound(slots.begin(), slots.end(), replica, replica_less);
  return (pos != slots.end() && pos->replica == replica) ? &*pos : nullptr;
}

void Sideline::put(const std::string& key, std::uint32_t replica, double value, double score) {
  auto it = groups_.try_emplace(key).first;
  auto& slots = it->second.slots_;
  auto pos = std::lower_bound(slots.begin(), slots.end(), replica, replica_less);
  if (pos != slots.end() && pos->replica == replica) {
    order_.erase(Ordered{pos->value, &it->first, replica});
    pos->value = value;
    pos->score = score;
  } else {
    slots.insert(pos, Slot{replica, value, score});
  }
  order_.insert(Ordered{value, &it->first, replica});
}

bool Sideline::offer(const std::string& key, std::uint32_t replica, double value, double score) {
  auto it = groups_.find(key);
  if (it != groups_.end()) {
    if (Slot* s = locate(it, replica); s && !(value < s->value)) return false;
  }
  put(key, replica, value, score);
  return true;
}

bool Sideline::erase(const std::string& key, std::uint32_t replica) {
  auto it = groups_.find(key);
  if (it == groups_.end()) return false;
  auto& slots = it->second.slots_;
  auto pos = std::lower_bound(slots.begin(), slots.end(), replica, replica_less);
  if (pos == slots.end() || pos->replica != replica) return false;
  order_.erase(Ordered{pos->value, &it->first, replica});
  slots.erase(pos);
  if (slots.empty()) groups_.erase(it);
  return true;
}

double Sideline::max_value() const noexcept {
  return order_.empty() ? -std::numeric_limits<double>::infinity() : order_.rbegin()->value;
}

Sideline::Item Sideline::pop_max() {
  const Ordered top = *order_.rbegin();
  const Slot* slot = find(*top.key, top.replica);
  Item item{*top.key, top.replica, slot->value, slot->score};
  erase(item.key, item.replica);
  return item;
}

std::size_t Sideline::remove_if(const std::function<bool(const std::string&, const Slot&)>& pred) {
  std::size_t removed = 0;
  for (auto it = groups_.begin(); it != groups_.end();) {
    auto& slots = it->second.slots_;
    auto keep_end = std::stable_partition(slots.begin(), slots.end(),
                                          [&](const Slot& s) { return !pred(it->first, s); });
    for (auto s = keep_end; s != slots.end(); ++s) {
      order_.erase(Ordered{s->value, &it->first, s->replica});
      ++removed;
    }
    slots.erase(keep_end, slots.end());
    it = slots.empty() ? groups_.erase(it) : std::next(it);
  }
  return removed;
}

void Sideline::merge(const Sideline& other) {
  if (&other == this) return;
  for (const auto& [key, g] : other.groups_)
    for (const Slot& s : g.slots_) offer(key, s.replica, s.value, s.score);
}

bool operator==(const Sideline& a, const Sideline& b) {
  if (a.size() != b.size() || a.groups_.size() != b.groups_.size()) return false;
  for (const auto& [key, g] : a.groups_) {
    const Sideline::Group* other = b.group(key);
    if (!other) return false;
    const auto& x = g.slots();
    const auto& y = other->slots();
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].replica != y[i].replica || x[i].value != y[i].value) return false;
    }
  }
  return true;
}

}  // namespace fsketch
