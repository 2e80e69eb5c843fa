#pragma once

// Integer-coded genetic algorithm over expansion plans.
//
// The gene string is the stage-major concatenation of the build counts of
// every "active" type (a type with u_max > 0 in some stage). Types that are
// never buildable stay at zero and are not part of the string.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gep/evaluator.hpp"
#include "gep/planning_model.hpp"
#include "gep/rng.hpp"

namespace gep {

class GeneSpace {
 public:
  explicit GeneSpace(const Problem& p) : stages_(p.stage_count()) {
    for (int i = 0; i < p.type_count(); ++i)
      for (int t = 0; t < p.stage_count(); ++t)
        if (p.constraints.u_max(t, i) > 0) {
          active_.push_back(i);
          break;
        }
  }

  int stages() const { return stages_; }
  const std::vector<int>& active_types() const { return active_; }
  int genes_per_stage() const { return static_cast<int>(active_.size()); }
  int size() const { return stages_ * genes_per_stage(); }

  std::pair<int, int> locate(int gene) const {
    const int a = genes_per_stage();
    return {gene / a, active_[static_cast<std::size_t>(gene % a)]};
  }

  std::vector<int> flatten(const ExpansionPlan& plan) const {
    std::vector<int> g;
    g.reserve(static_cast<std::size_t>(size()));
    for (int t = 0; t < stages_; ++t)
      for (int i : active_) g.push_back(plan(t, i));
    return g;
  }

  void scatter(const std::vector<int>& genes, ExpansionPlan& plan) const {
    std::size_t k = 0;
    for (int t = 0; t < stages_; ++t)
      for (int i : active_) plan(t, i) = genes[k++];
  }

 private:
  int stages_;
  std::vector<int> active_;
};

namespace detail {

struct StageStatus {
  std::vector<double> installed;  // MW per type, this stage
  double total = 0.0;
  std::map<FuelClass, double> by_class;
};

inline StageStatus stage_status(const Problem& p, const ExpansionPlan& plan, int t, const std::vector<double>& prior) {
  StageStatus s;
  s.installed = prior;
  for (int i = 0; i < p.type_count(); ++i) {
    const double mw = (plan(t, i) + p.forced_builds(t, i)) * p.unit(i).unit_capacity_mw;
    s.installed[static_cast<std::size_t>(i)] += mw;
  }
  for (int i = 0; i < p.type_count(); ++i) {
    s.total += s.installed[static_cast<std::size_t>(i)];
    s.by_class[p.unit(i).fuel_class] += s.installed[static_cast<std::size_t>(i)];
  }
  return s;
}

/// Normalized reserve + fuel-mix violation of one stage (LOLP excluded).
inline double stage_violation(const Problem& p, const StageStatus& s, int t) {
  const double peak = p.horizon.peak_load_mw[static_cast<std::size_t>(t)];
  const double lo = (1.0 + p.constraints.reserve_min) * peak;
  const double hi = (1.0 + p.constraints.reserve_max) * peak;
  double v = band_violation(s.total, lo, hi) / peak;
  if (s.total > 0.0)
    for (const auto& [fc, band] : p.constraints.fuel_mix) {
      const auto it = s.by_class.find(fc);
      const double share = (it == s.by_class.end() ? 0.0 : it->second) / s.total;
      v += band_violation(share, band.min, band.max);
    }
  return v;
}

inline constexpr double kShareTol = 1e-12;

/// Steepest descent on the stage's reserve + fuel-mix violation over single
/// +-1 gene moves, then over pairs of moves. Among equally good moves the
/// one adding the least investment wins; earlier genes break exact ties.
inline void polish_stage(const Problem& p, const GeneSpace& space, ExpansionPlan& plan, int t,
                         const std::vector<double>& prior) {
  const auto& c = p.constraints;
  const auto& active = space.active_types();
  struct Move {
    int i = -1, di = 0, j = -1, dj = 0;
  };
  auto ok = [&](int i, int d) { return plan(t, i) + d >= c.u_min(t, i) && plan(t, i) + d <= c.u_max(t, i); };
  auto invest = [&](int i, int d) { return d * p.unit(i).invest_cost_per_kw * p.unit(i).unit_capacity_mw; };
  auto violation = [&] { return stage_violation(p, stage_status(p, plan, t, prior), t); };

  double v = violation();
  for (int step = 0; step < 64 && v > 0.0; ++step) {
    Move best;
    double best_v = v * (1.0 - 1e-12);
    double best_cost = 0.0;
    auto consider = [&](const Move& m) {
      plan(t, m.i) += m.di;
      if (m.j >= 0) plan(t, m.j) += m.dj;
      const double nv = violation();
      plan(t, m.i) -= m.di;
      if (m.j >= 0) plan(t, m.j) -= m.dj;
      const double cost = invest(m.i, m.di) + (m.j >= 0 ? invest(m.j, m.dj) : 0.0);
      if (nv < best_v - 1e-15 || (best.i >= 0 && std::abs(nv - best_v) <= 1e-15 && cost < best_cost)) {
        best = m;
        best_v = nv;
        best_cost = cost;
      }
    };
    for (int i : active)
      for (int d : {+1, -1})
        if (ok(i, d)) consider({i, d});
    if (best.i < 0)
      for (std::size_t a = 0; a < active.size(); ++a)
        for (std::size_t b = a + 1; b < active.size(); ++b)
          for (int da : {+1, -1})
            for (int db : {+1, -1}) {
              const int i = active[a], j = active[b];
              if (ok(i, da) && ok(j, db)) consider({i, da, j, db});
            }
    if (best.i < 0) break;
    plan(t, best.i) += best.di;
    if (best.j >= 0) plan(t, best.j) += best.dj;
    v = best_v;
  }
}

/// Greedy repair of stage t toward the reserve band and the fuel-mix bands,
/// one unit at a time: fill short fuel classes, add the cheapest capacity
/// when below the reserve minimum, trim classes over their cap, and remove
/// the most expensive capacity when above the reserve maximum.
inline void repair_stage(const Problem& p, const GeneSpace& space, ExpansionPlan& plan, int t,
                         const std::vector<double>& prior) {
  const auto& c = p.constraints;
  const double peak = p.horizon.peak_load_mw[static_cast<std::size_t>(t)];
  const double lo = (1.0 + c.reserve_min) * peak;
  const double hi = (1.0 + c.reserve_max) * peak;
  const auto& active = space.active_types();

  int budget = 10;
  for (int i : active) budget += 2 * (c.u_max(t, i) - c.u_min(t, i));

  auto cost = [&p](int i) { return p.unit(i).invest_cost_per_kw; };
  auto cap = [&p](int i) { return p.unit(i).unit_capacity_mw; };
  auto band_of = [&c](FuelClass fc) -> const FuelBand* {
    const auto it = c.fuel_mix.find(fc);
    return it == c.fuel_mix.end() ? nullptr : &it->second;
  };
  auto share_after = [](const StageStatus& s, FuelClass fc, double delta_class, double delta_total) {
    const auto it = s.by_class.find(fc);
    const double cls = (it == s.by_class.end() ? 0.0 : it->second) + delta_class;
    const double tot = s.total + delta_total;
    return tot > 0.0 ? cls / tot : 0.0;
  };
  auto addable = [&](int i) { return plan(t, i) < c.u_max(t, i); };
  auto removable = [&](int i) { return plan(t, i) > c.u_min(t, i); };

  // Cheapest addable (or most expensive removable) type satisfying `ok`.
  auto pick = [&](bool add, auto&& ok) {
    int best = -1;
    for (int i : active) {
      if (add ? !addable(i) : !removable(i)) continue;
      if (!ok(i)) continue;
      if (best < 0 || (add ? cost(i) < cost(best) : cost(i) > cost(best))) best = i;
    }
    return best;
  };

  for (int step = 0; step < budget; ++step) {
    const StageStatus s = stage_status(p, plan, t, prior);

    // Fuel class furthest below its minimum.
    FuelClass short_class{};
    double short_by = kShareTol;
    FuelClass over_class{};
    double over_by = kShareTol;
    for (const auto& [fc, band] : c.fuel_mix) {
      const double share = share_after(s, fc, 0.0, 0.0);
      if (band.min - share > short_by) short_by = band.min - share, short_class = fc;
      if (share - band.max > over_by) over_by = share - band.max, over_class = fc;
    }
    const bool is_short = short_by > kShareTol;
    const bool is_over = over_by > kShareTol;

    if (is_short) {
      int i = pick(true, [&](int k) { return p.unit(k).fuel_class == short_class; });
      if (i < 0)
        i = pick(false, [&](int k) { return p.unit(k).fuel_class != short_class && s.total - cap(k) >= lo; });
      if (i >= 0) {
        plan(t, i) += p.unit(i).fuel_class == short_class ? 1 : -1;
        continue;
      }
    }
    if (s.total < lo) {
      int i = pick(true, [&](int k) {
        const FuelBand* b = band_of(p.unit(k).fuel_class);
        return !b || share_after(s, p.unit(k).fuel_class, cap(k), cap(k)) <= b->max + kShareTol;
      });
      if (i < 0) i = pick(true, [](int) { return true; });
      if (i >= 0) {
        ++plan(t, i);
        continue;
      }
    }
    if (is_over) {
      int i = pick(false, [&](int k) { return p.unit(k).fuel_class == over_class; });
      if (i < 0)
        i = pick(true, [&](int k) { return p.unit(k).fuel_class != over_class && s.total + cap(k) <= hi; });
      if (i >= 0) {
        plan(t, i) += p.unit(i).fuel_class == over_class ? -1 : 1;
        continue;
      }
    }
    if (s.total > hi) {
      int i = pick(false, [&](int k) {
        const FuelBand* b = band_of(p.unit(k).fuel_class);
        return !b || share_after(s, p.unit(k).fuel_class, -cap(k), -cap(k)) + kShareTol >= b->min;
      });
      if (i < 0) i = pick(false, [](int) { return true; });
      if (i >= 0) {
        --plan(t, i);
        continue;
      }
    }
    break;
  }
  polish_stage(p, space, plan, t, prior);
}

inline std::vector<double> existing_row(const Problem& p) {
  std::vector<double> row;
  for (const auto& u : p.units) row.push_back(u.existing_mw());
  return row;
}

}  // namespace detail

/// Clamps genes into [u_min, u_max] and runs the greedy stage repair in
/// stage order. Deterministic.
inline void repair_plan(const Problem& p, const GeneSpace& space, ExpansionPlan& plan) {
  const auto& c = p.constraints;
  std::vector<double> prior = detail::existing_row(p);
  for (int t = 0; t < p.stage_count(); ++t) {
    for (int i = 0; i < p.type_count(); ++i) plan(t, i) = std::clamp(plan(t, i), c.u_min(t, i), c.u_max(t, i));
    detail::repair_stage(p, space, plan, t, prior);
    prior = detail::stage_status(p, plan, t, prior).installed;
  }
}

/// Stage by stage: draw genes uniformly in [u_min, u_max], repair, and retry
/// up to `attempts` times; keeps the least-violating candidate of each stage.
inline ExpansionPlan random_feasible_chromosome(const Problem& p, const GeneSpace& space, Rng& rng, int attempts) {
  const auto& c = p.constraints;
  ExpansionPlan plan = p.zero_plan();
  for (int t = 0; t < p.stage_count(); ++t)
    for (int i = 0; i < p.type_count(); ++i) plan(t, i) = c.u_min(t, i);

  std::vector<double> prior = detail::existing_row(p);
  for (int t = 0; t < p.stage_count(); ++t) {
    std::vector<int> best_row;
    double best_v = std::numeric_limits<double>::infinity();
    for (int a = 0; a < std::max(1, attempts); ++a) {
      for (int i : space.active_types()) plan(t, i) = rng.uniform_int(c.u_min(t, i), c.u_max(t, i));
      detail::repair_stage(p, space, plan, t, prior);
      const double v = detail::stage_violation(p, detail::stage_status(p, plan, t, prior), t);
      if (v < best_v) {
        best_v = v;
        best_row.assign(plan.row(t).begin(), plan.row(t).end());
      }
      if (v == 0.0) break;
    }
    std::copy(best_row.begin(), best_row.end(), plan.row(t).begin());
    prior = detail::stage_status(p, plan, t, prior).installed;
  }
  return plan;
}

enum class CrossoverKind { OnePoint, TwoPoint, Substring };

/// Swaps gene tails after `cut` (1 <= cut < size).
inline std::pair<ExpansionPlan, ExpansionPlan> one_point_crossover(const ExpansionPlan& a, const ExpansionPlan& b,
                                                                   const GeneSpace& space, int cut) {
  auto ga = space.flatten(a), gb = space.flatten(b);
  for (std::size_t k = static_cast<std::size_t>(cut); k < ga.size(); ++k) std::swap(ga[k], gb[k]);
  ExpansionPlan ca = a, cb = b;
  space.scatter(ga, ca);
  space.scatter(gb, cb);
  return {ca, cb};
}

/// Swaps the gene segment [first, last).
inline std::pair<ExpansionPlan, ExpansionPlan> two_point_crossover(const ExpansionPlan& a, const ExpansionPlan& b,
                                                                   const GeneSpace& space, int first, int last) {
  auto ga = space.flatten(a), gb = space.flatten(b);
  for (int k = first; k < last; ++k) std::swap(ga[static_cast<std::size_t>(k)], gb[static_cast<std::size_t>(k)]);
  ExpansionPlan ca = a, cb = b;
  space.scatter(ga, ca);
  space.scatter(gb, cb);
  return {ca, cb};
}

/// Swaps the whole gene block of one planning stage.
inline std::pair<ExpansionPlan, ExpansionPlan> substring_crossover(const ExpansionPlan& a, const ExpansionPlan& b,
                                                                   const GeneSpace& space, int stage) {
  ExpansionPlan ca = a, cb = b;
  for (int i : space.active_types()) std::swap(ca(stage, i), cb(stage, i));
  return {ca, cb};
}

inline CrossoverKind pick_crossover(const CrossoverProbs& probs, Rng& rng) {
  const double r = rng.uniform01();
  if (r < probs.one_point) return CrossoverKind::OnePoint;
  if (r < probs.one_point + probs.two_point) return CrossoverKind::TwoPoint;
  return CrossoverKind::Substring;
}

/// Operator chosen by roulette over the configured probabilities; children
/// are repaired.
inline std::pair<ExpansionPlan, ExpansionPlan> crossover(const Problem& p, const GeneSpace& space,
                                                         const ExpansionPlan& a, const ExpansionPlan& b, Rng& rng,
                                                         const GAConfig& config) {
  if (!a.same_shape(b)) throw std::invalid_argument("crossover: parents differ in shape");
  const int n = space.size();
  std::pair<ExpansionPlan, ExpansionPlan> kids{a, b};
  CrossoverKind kind = pick_crossover(config.crossover_type_probs, rng);
  if (kind == CrossoverKind::TwoPoint && n < 3) kind = CrossoverKind::OnePoint;
  switch (kind) {
    case CrossoverKind::OnePoint:
      if (n >= 2) kids = one_point_crossover(a, b, space, rng.uniform_int(1, n - 1));
      break;
    case CrossoverKind::TwoPoint: {
      int c1 = rng.uniform_int(1, n - 1);
      int c2 = rng.uniform_int(1, n - 2);
      if (c2 >= c1) ++c2;
      if (c1 > c2) std::swap(c1, c2);
      kids = two_point_crossover(a, b, space, c1, c2);
      break;
    }
    case CrossoverKind::Substring:
      if (space.genes_per_stage() > 0) kids = substring_crossover(a, b, space, rng.uniform_int(0, space.stages() - 1));
      break;
  }
  repair_plan(p, space, kids.first);
  repair_plan(p, space, kids.second);
  return kids;
}

/// Redraws one uniformly chosen gene in [u_min, u_max], then repairs.
inline ExpansionPlan mutate(const Problem& p, const GeneSpace& space, ExpansionPlan plan, Rng& rng) {
  if (space.size() == 0) return plan;
  const auto [t, i] = space.locate(rng.uniform_int(0, space.size() - 1));
  plan(t, i) = rng.uniform_int(p.constraints.u_min(t, i), p.constraints.u_max(t, i));
  repair_plan(p, space, plan);
  return plan;
}

/// Rank roulette over a population sorted best-first: member k has weight
/// n - k. Returns the selected index.
inline int select_parent(int population_size, Rng& rng) {
  if (population_size < 1) throw std::invalid_argument("select_parent: empty population");
  const auto n = static_cast<std::uint64_t>(population_size);
  std::uint64_t x = rng.below(n * (n + 1) / 2);
  for (std::uint64_t k = 0; k < n; ++k) {
    const std::uint64_t w = n - k;
    if (x < w) return static_cast<int>(k);
    x -= w;
  }
  return population_size - 1;
}

/// Rank roulette over unsorted fitness values (lower is better; ties by index).
inline int select_parent(std::span<const double> fitness, Rng& rng) {
  std::vector<int> order(fitness.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fitness[static_cast<std::size_t>(a)] < fitness[static_cast<std::size_t>(b)]; });
  return order[static_cast<std::size_t>(select_parent(static_cast<int>(fitness.size()), rng))];
}

struct GenerationStats {
  double best = 0.0;
  double mean = 0.0;

  bool operator==(const GenerationStats&) const = default;
};

struct GARunResult {
  ExpansionPlan best_plan;
  PlanEvaluation best;
  std::vector<GenerationStats> history;
  std::uint64_t seed = 0;
  std::size_t evaluations = 0;

  bool operator==(const GARunResult&) const = default;
};

struct RunSummary {
  std::uint64_t seed = 0;
  double best_fitness = 0.0;
  double best_total = 0.0;
  bool feasible = false;
};

struct MultiRunResult {
  GARunResult best;
  std::size_t best_run = 0;
  std::vector<RunSummary> runs;
};

namespace detail {

struct VectorHash {
  std::size_t operator()(const std::vector<int>& v) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (int x : v) {
      h ^= static_cast<std::uint32_t>(x);
      h *= 0x100000001b3ull;
    }
    return static_cast<std::size_t>(h);
  }
};

/// Memoized, optionally parallel fitness evaluation. Results do not depend
/// on the thread count: work is split by index and merged in order.
class FitnessCache {
 public:
  FitnessCache(const Evaluator& ev, int threads) : ev_(ev), threads_(std::max(1, threads)) {}

  std::vector<double> evaluate(const std::vector<ExpansionPlan>& plans) {
    std::vector<double> out(plans.size(), 0.0);
    std::vector<std::size_t> todo;
    std::unordered_map<std::vector<int>, std::size_t, VectorHash> pending;
    std::vector<std::size_t> alias(plans.size(), SIZE_MAX);
    for (std::size_t k = 0; k < plans.size(); ++k) {
      const auto& key = plans[k].data();
      if (auto it = cache_.find(key); it != cache_.end()) {
        out[k] = it->second;
      } else if (auto jt = pending.find(key); jt != pending.end()) {
        alias[k] = jt->second;
      } else {
        pending.emplace(key, k);
        todo.push_back(k);
      }
    }

    std::vector<double> results(todo.size(), 0.0);
    auto work = [&](std::size_t begin, std::size_t end) {
      for (std::size_t j = begin; j < end; ++j) results[j] = ev_.evaluate(plans[todo[j]]).fitness;
    };
    const std::size_t nthreads = std::min<std::size_t>(static_cast<std::size_t>(threads_), todo.size());
    if (nthreads <= 1) {
      work(0, todo.size());
    } else {
      std::vector<std::jthread> pool;
      const std::size_t chunk = (todo.size() + nthreads - 1) / nthreads;
      for (std::size_t w = 0; w < nthreads; ++w) {
        const std::size_t b = w * chunk, e = std::min(todo.size(), b + chunk);
        if (b < e) pool.emplace_back(work, b, e);
      }
    }

    for (std::size_t j = 0; j < todo.size(); ++j) {
      out[todo[j]] = results[j];
      cache_.emplace(plans[todo[j]].data(), results[j]);
    }
    for (std::size_t k = 0; k < plans.size(); ++k)
      if (alias[k] != SIZE_MAX) out[k] = out[alias[k]];
    evaluations_ += todo.size();
    return out;
  }

  std::size_t evaluations() const { return evaluations_; }

 private:
  const Evaluator& ev_;
  int threads_;
  std::unordered_map<std::vector<int>, double, VectorHash> cache_;
  std::size_t evaluations_ = 0;
};

}  // namespace detail

struct ExecutionOptions {
  int threads = 1;
};

/// One GA run seeded with config.rng_seed.
inline GARunResult evolve(const Problem& p, const GAConfig& config, ExecutionOptions exec = {}) {
  validate(config);
  const Evaluator ev(p, config.penalty_weights);
  const GeneSpace space(p);
  detail::FitnessCache cache(ev, exec.threads);
  Rng rng(config.rng_seed);
  const int n = config.population_size;

  std::vector<ExpansionPlan> pop;
  pop.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) pop.push_back(random_feasible_chromosome(p, space, rng, config.repair_attempts));
  std::vector<double> fit = cache.evaluate(pop);

  GARunResult result;
  result.seed = config.rng_seed;
  double best_fit = std::numeric_limits<double>::infinity();
  ExpansionPlan best_plan = pop.front();

  auto record = [&] {
    double sum = 0.0;
    for (std::size_t k = 0; k < fit.size(); ++k) {
      sum += fit[k];
      if (fit[k] < best_fit) best_fit = fit[k], best_plan = pop[k];
    }
    result.history.push_back({best_fit, sum / static_cast<double>(fit.size())});
  };
  record();

  const int elites = std::min(config.elite_count, n);
  int children = static_cast<int>(config.crossover_fraction * n) / 2 * 2;
  children = std::min(children, (n - elites) / 2 * 2);

  for (int g = 0; g < config.generations; ++g) {
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return fit[static_cast<std::size_t>(a)] < fit[static_cast<std::size_t>(b)]; });
    auto ranked = [&](int k) -> const ExpansionPlan& { return pop[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])]; };

    std::vector<ExpansionPlan> next;
    next.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < elites; ++k) next.push_back(ranked(k));
    for (int k = 0; k < children; k += 2) {
      const ExpansionPlan& a = ranked(select_parent(n, rng));
      const ExpansionPlan& b = ranked(select_parent(n, rng));
      auto [ca, cb] = crossover(p, space, a, b, rng, config);
      next.push_back(std::move(ca));
      next.push_back(std::move(cb));
    }
    while (static_cast<int>(next.size()) < n) next.push_back(ranked(select_parent(n, rng)));

    // Mutate distinct non-elite members.
    std::vector<int> slots(static_cast<std::size_t>(n - elites));
    std::iota(slots.begin(), slots.end(), elites);
    const int mutants = std::min<int>(config.mutants_per_generation, static_cast<int>(slots.size()));
    for (int m = 0; m < mutants; ++m) {
      const int j = m + rng.uniform_int(0, static_cast<int>(slots.size()) - 1 - m);
      std::swap(slots[static_cast<std::size_t>(m)], slots[static_cast<std::size_t>(j)]);
      auto& target = next[static_cast<std::size_t>(slots[static_cast<std::size_t>(m)])];
      target = mutate(p, space, std::move(target), rng);
    }

    pop = std::move(next);
    fit = cache.evaluate(pop);
    record();
  }

  result.best_plan = best_plan;
  result.best = ev.evaluate(best_plan);
  result.evaluations = cache.evaluations();
  return result;
}

/// Independent runs with sub-seeds derive_seed(rng_seed, r); returns the
/// lowest-fitness run (earliest on ties) and a summary of every run.
inline MultiRunResult multi_run(const Problem& p, const GAConfig& config, ExecutionOptions exec = {}) {
  validate(config);
  MultiRunResult out;
  for (int r = 0; r < config.runs; ++r) {
    GAConfig cfg = config;
    cfg.rng_seed = derive_seed(config.rng_seed, static_cast<std::uint64_t>(r));
    GARunResult run = evolve(p, cfg, exec);
    out.runs.push_back({run.seed, run.best.fitness, run.best.cost.total, run.best.feasibility.feasible()});
    if (r == 0 || run.best.fitness < out.best.best.fitness) {
      out.best = std::move(run);
      out.best_run = static_cast<std::size_t>(r);
    }
  }
  return out;
}

}  // namespace gep
