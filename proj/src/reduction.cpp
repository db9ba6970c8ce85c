#include "avm/reduction.hpp"

#include <utility>

namespace avm {

namespace {

// Enumerates one-step full reducts with per-address memoization so shared
// sub-machines are expanded once.
class SuccessorEnumerator {
 public:
  explicit SuccessorEnumerator(AddressTable& table) : table_(table) {}

  std::vector<Machine> all(const Machine& m, bool include_head) {
    std::vector<Machine> out;
    if (include_head) {
      if (auto s = step(table_, m)) out.push_back(std::move(*s));
    }
    for (std::size_t i = 0; i < m.register_count(); ++i) {
      const RegisterCell& cell = m.registers()[i];
      if (!cell) continue;
      for (Address next : address_successors(*cell)) {
        out.push_back(m.with_register(i, next));
      }
    }
    for (std::size_t j = 0; j < m.tape().size(); ++j) {
      for (Address next : address_successors(m.tape()[j])) {
        out.push_back(m.with_tape_entry(j, next));
      }
    }
    return out;
  }

 private:
  const std::vector<Address>& address_successors(Address a) {
    auto it = memo_.find(a.id());
    if (it != memo_.end()) return it->second;
    // Table acyclicity bounds this recursion: machines reference only
    // strictly smaller ids.
    std::vector<Address> succs;
    for (const Machine& n : all(table_.lookup(a), true)) {
      succs.push_back(table_.intern(n));
    }
    return memo_.emplace(a.id(), std::move(succs)).first->second;
  }

  AddressTable& table_;
  std::unordered_map<Address::Id, std::vector<Address>> memo_;
};

}  // namespace

std::vector<Machine> c_successors(AddressTable& table, const Machine& m) {
  return SuccessorEnumerator(table).all(m, true);
}

std::vector<Machine> inner_successors(AddressTable& table, const Machine& m) {
  return SuccessorEnumerator(table).all(m, false);
}

std::optional<DeepCache::Entry> DeepCache::find(Address a,
                                                std::size_t fuel) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = entries_.find(a.id());
  if (it == entries_.end()) return std::nullopt;
  if (!it->second.complete && it->second.fuel < fuel) return std::nullopt;
  return it->second;
}

void DeepCache::store(Address a, Entry e) {
  std::lock_guard<std::mutex> lock(mutex_);
  entries_.insert_or_assign(a.id(), e);
}

namespace {

class Normalizer {
 public:
  Normalizer(AddressTable& table, std::size_t fuel, DeepCache& cache)
      : table_(table), fuel_(fuel), cache_(cache) {}

  DeepForm normalize(const Machine& m) {
    Outcome head = run(table_, m, fuel_);
    bool complete = head.terminated();
    OutcomeKind truncation = complete ? OutcomeKind::Final : head.kind;
    Machine result = head.machine;
    for (std::size_t i = 0; i < result.register_count(); ++i) {
      const RegisterCell& cell = result.registers()[i];
      if (!cell) continue;
      auto entry = normalize_address(*cell);
      result = result.with_register(i, entry.normal);
      if (!entry.complete && complete) {
        complete = false;
        truncation = entry.truncation;
      }
    }
    for (std::size_t j = 0; j < result.tape().size(); ++j) {
      auto entry = normalize_address(result.tape()[j]);
      result = result.with_tape_entry(j, entry.normal);
      if (!entry.complete && complete) {
        complete = false;
        truncation = entry.truncation;
      }
    }
    return DeepForm{std::move(result), complete, truncation};
  }

 private:
  DeepCache::Entry normalize_address(Address a) {
    if (auto hit = cache_.find(a, fuel_)) return *hit;
    DeepForm form = normalize(table_.lookup(a));
    DeepCache::Entry entry{table_.intern(form.machine), form.complete,
                           form.truncation, fuel_};
    cache_.store(a, entry);
    return entry;
  }

  AddressTable& table_;
  std::size_t fuel_;
  DeepCache& cache_;
};

}  // namespace

DeepForm deep_normalize(AddressTable& table, const Machine& m,
                        std::size_t fuel, DeepCache& cache) {
  return Normalizer(table, fuel, cache).normalize(m);
}

DeepForm deep_normalize(AddressTable& table, const Machine& m,
                        std::size_t fuel) {
  DeepCache cache;
  return deep_normalize(table, m, fuel, cache);
}

namespace {

struct HeadInfo {
  Machine machine;
  bool ok;
  OutcomeKind end;
};

// Structural comparison of deep forms, computed lazily level by level.
class EvalComparer {
 public:
  EvalComparer(AddressTable& table, std::size_t fuel)
      : table_(table), fuel_(fuel) {}

  EvalVerdict compare(Address a, Address b, const std::string& path) {
    if (a == b) return {Equivalence::Equiv, "", ""};
    auto key = std::make_pair(a.id(), b.id());
    auto memo = memo_.find(key);
    if (memo != memo_.end()) return memo->second;
    EvalVerdict v = compare_uncached(a, b, path);
    memo_.emplace(key, v);
    return v;
  }

 private:
  EvalVerdict compare_uncached(Address a, Address b, const std::string& path) {
    const HeadInfo& ha = head(a);
    const HeadInfo& hb = head(b);
    if (!ha.ok || !hb.ok) {
      bool cycle = (!ha.ok && ha.end == OutcomeKind::Cycle) ||
                   (!hb.ok && hb.end == OutcomeKind::Cycle);
      return {Equivalence::Unknown, "", cycle ? "cycle" : "fuel"};
    }
    const Machine& ma = ha.machine;
    const Machine& mb = hb.machine;
    if (ma.register_count() != mb.register_count()) {
      return distinct(path, "register counts differ");
    }
    if (!(ma.program() == mb.program())) {
      return distinct(path, "programs differ");
    }
    if (ma.tape().size() != mb.tape().size()) {
      return distinct(path, "tape lengths differ");
    }
    for (std::size_t i = 0; i < ma.register_count(); ++i) {
      if (ma.registers()[i].has_value() != mb.registers()[i].has_value()) {
        return distinct(path, "register " + std::to_string(i) +
                                  " initialized on one side only");
      }
    }
    EvalVerdict verdict{Equivalence::Equiv, "", ""};
    for (std::size_t i = 0; i < ma.register_count(); ++i) {
      if (!ma.registers()[i]) continue;
      EvalVerdict sub = compare(*ma.registers()[i], *mb.registers()[i],
                                path + "/R" + std::to_string(i));
      if (sub.verdict == Equivalence::Distinct) return sub;
      if (sub.verdict == Equivalence::Unknown) verdict = sub;
    }
    for (std::size_t j = 0; j < ma.tape().size(); ++j) {
      EvalVerdict sub = compare(ma.tape()[j], mb.tape()[j],
                                path + "/T" + std::to_string(j));
      if (sub.verdict == Equivalence::Distinct) return sub;
      if (sub.verdict == Equivalence::Unknown) verdict = sub;
    }
    return verdict;
  }

  static EvalVerdict distinct(const std::string& path, const std::string& what) {
    return {Equivalence::Distinct, (path.empty() ? "top" : path) + ": " + what,
            ""};
  }

  const HeadInfo& head(Address a) {
    auto it = heads_.find(a.id());
    if (it != heads_.end()) return it->second;
    Outcome out = run(table_, table_.lookup(a), fuel_);
    return heads_
        .emplace(a.id(), HeadInfo{out.machine, out.terminated(), out.kind})
        .first->second;
  }

  struct PairHash {
    std::size_t operator()(
        const std::pair<Address::Id, Address::Id>& p) const noexcept {
      std::size_t seed = static_cast<std::size_t>(p.first);
      detail::hash_combine(seed, static_cast<std::size_t>(p.second));
      return seed;
    }
  };

  AddressTable& table_;
  std::size_t fuel_;
  std::unordered_map<Address::Id, HeadInfo> heads_;
  std::unordered_map<std::pair<Address::Id, Address::Id>, EvalVerdict, PairHash>
      memo_;
};

}  // namespace

EvalVerdict eval_equiv(AddressTable& table, Address a, Address b,
                       std::size_t fuel) {
  if (!table.issued(a)) throw DanglingAddress(a.id());
  if (!table.issued(b)) throw DanglingAddress(b.id());
  return EvalComparer(table, fuel).compare(a, b, "");
}

}  // namespace avm
