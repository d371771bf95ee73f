#include "evrp/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <tuple>

#include "evrp/errors.hpp"

namespace evrp {

namespace {

constexpr Minutes kInf = std::numeric_limits<Minutes>::max() / 4;

// Subset DP over closed tours. suffix[mask][v] is the cheapest way to start
// at node v (customer position, or n for the depot), visit exactly the
// customers in mask, and return to the depot. One full table prices every
// customer subset of an instance in a single pass.
class TourTable {
 public:
  TourTable(const Instance& instance, std::span<const LocationId> customers, Shift shift)
      : instance_(instance),
        customers_(customers.begin(), customers.end()),
        n_(customers.size()),
        shift_(shift) {
    const std::size_t masks = std::size_t{1} << n_;
    suffix_.assign(masks * (n_ + 1), kInf);

    for (std::size_t v = 0; v <= n_; ++v) {
      at(0, v) = v == n_ ? 0 : arc_to_depot(v);
    }
    for (std::size_t mask = 1; mask < masks; ++mask) {
      for (std::size_t v = 0; v <= n_; ++v) {
        if (v < n_ && (mask & (std::size_t{1} << v))) continue;
        Minutes best = kInf;
        for (std::size_t u = 0; u < n_; ++u) {
          if (!(mask & (std::size_t{1} << u))) continue;
          const Minutes rest = at(mask & ~(std::size_t{1} << u), u);
          if (rest >= kInf) continue;
          best = std::min(best, arc(v, u) + rest);
        }
        at(mask, v) = best;
      }
    }
  }

  Minutes tour_cost(std::size_t mask) const { return at(mask, n_); }

  // Lexicographically smallest optimal visiting order, by greedy forward
  // reconstruction against the suffix costs.
  std::vector<LocationId> reconstruct(std::size_t mask) const {
    std::vector<LocationId> route;
    std::size_t remaining = mask;
    std::size_t current = n_;
    while (remaining != 0) {
      const Minutes target = at(remaining, current);
      for (std::size_t u = 0; u < n_; ++u) {
        if (!(remaining & (std::size_t{1} << u))) continue;
        if (arc(current, u) + at(remaining & ~(std::size_t{1} << u), u) == target) {
          route.push_back(customers_[u]);
          remaining &= ~(std::size_t{1} << u);
          current = u;
          break;
        }
      }
    }
    return route;
  }

 private:
  Minutes& at(std::size_t mask, std::size_t v) { return suffix_[mask * (n_ + 1) + v]; }
  Minutes at(std::size_t mask, std::size_t v) const { return suffix_[mask * (n_ + 1) + v]; }

  const TravelMatrix& matrix() const {
    return shift_ == Shift::day ? instance_.travel_day : instance_.travel_night;
  }
  Minutes arc(std::size_t from, std::size_t to) const {
    const LocationId a = from == n_ ? instance_.depot : customers_[from];
    return matrix()(a, customers_[to]);
  }
  Minutes arc_to_depot(std::size_t from) const {
    return matrix()(customers_[from], instance_.depot);
  }

  const Instance& instance_;
  std::vector<LocationId> customers_;
  std::size_t n_;
  Shift shift_;
  std::vector<Minutes> suffix_;
};

struct BlockOption {
  std::size_t night_mask = 0;  // subset of the block served at night
  Minutes travel = 0;
  Minutes recharge = 0;
};

struct BlockChoice {
  Engine engine = Engine::conventional;
  std::size_t day_mask = 0;
  std::size_t night_mask = 0;
};

std::vector<std::int64_t> make_assignment_key(const std::vector<BlockChoice>& blocks) {
  std::vector<std::int64_t> key;
  key.reserve(blocks.size() * 3);
  for (const BlockChoice& block : blocks) {
    key.push_back(block.engine == Engine::conventional ? 0 : 1);
    key.push_back(static_cast<std::int64_t>(block.day_mask));
    key.push_back(static_cast<std::int64_t>(block.night_mask));
  }
  return key;
}

Minutes min_recharge(Minutes day_travel, double speed) {
  if (day_travel <= 0) return 0;
  auto r = static_cast<Minutes>(std::ceil(static_cast<double>(day_travel) / speed));
  while (static_cast<double>(r) * speed < static_cast<double>(day_travel)) ++r;
  while (r > 0 && static_cast<double>(r - 1) * speed >= static_cast<double>(day_travel)) --r;
  return r;
}

}  // namespace

std::pair<std::vector<LocationId>, Minutes> optimal_route(
    const Instance& instance, std::span<const LocationId> customers, Shift shift) {
  if (customers.size() > static_cast<std::size_t>(kExactCustomerHardCap)) {
    throw LimitError("optimal_route: " + std::to_string(customers.size()) +
                     " customers exceed the enumeration cap of " +
                     std::to_string(kExactCustomerHardCap));
  }
  if (customers.empty()) return {{}, 0};

  std::vector<LocationId> sorted(customers.begin(), customers.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw StructuralError("optimal_route: duplicate customer in the set");
  }
  const auto n = static_cast<LocationId>(instance.location_count());
  for (LocationId id : sorted) {
    if (id < 0 || id >= n || id == instance.depot) {
      throw StructuralError("optimal_route: invalid customer " + std::to_string(id));
    }
  }

  TourTable table(instance, sorted, shift);
  const std::size_t full = (std::size_t{1} << sorted.size()) - 1;
  return {table.reconstruct(full), table.tour_cost(full)};
}

ExactResult solve_exact(const Instance& instance, const ExactLimits& limits) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<LocationId> customers = instance.all_customers();
  const std::size_t n = customers.size();

  const int cap = std::min(limits.max_customers, kExactCustomerHardCap);
  if (n > static_cast<std::size_t>(cap)) {
    throw LimitError("solve_exact: " + std::to_string(n) +
                     " customers exceed the configured limit of " + std::to_string(cap));
  }
  if (n == 0) {
    return {Solution{}, Score{0, 0, instance.costs.objective_mode}, 0};
  }

  const int max_blocks =
      std::min({limits.max_trucks,
                instance.trucks.max_conventional + instance.trucks.max_electric,
                static_cast<int>(n)});
  if (max_blocks <= 0) {
    throw InfeasibleError("solve_exact: fleet bounds admit no truck");
  }

  std::size_t ohd_mask = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (instance.is_ohd(customers[i])) ohd_mask |= std::size_t{1} << i;
  }

  const TourTable day_table(instance, customers, Shift::day);
  const TourTable night_table(instance, customers, Shift::night);

  const std::size_t mask_count = std::size_t{1} << n;
  std::vector<std::int64_t> load(mask_count, 0);
  for (std::size_t mask = 1; mask < mask_count; ++mask) {
    const auto low = static_cast<std::size_t>(std::countr_zero(mask));
    load[mask] =
        load[mask & (mask - 1)] + instance.volume[static_cast<std::size_t>(customers[low])];
  }

  // A customer with no feasible cell anywhere makes the instance infeasible.
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t mask = std::size_t{1} << i;
    const std::int64_t v = instance.volume[static_cast<std::size_t>(customers[i])];
    const bool conv_day = instance.trucks.max_conventional > 0 &&
                          v <= instance.trucks.capacity_conventional &&
                          day_table.tour_cost(mask) <= instance.trucks.range_conventional;
    const bool elec_day = instance.trucks.max_electric > 0 &&
                          v <= instance.trucks.capacity_electric &&
                          day_table.tour_cost(mask) <= instance.trucks.range_electric;
    const bool elec_night = instance.trucks.max_electric > 0 && (ohd_mask & mask) != 0 &&
                            v <= instance.trucks.capacity_electric &&
                            night_table.tour_cost(mask) <= instance.trucks.range_electric;
    if (!conv_day && !elec_day && !elec_night) {
      throw InfeasibleError("solve_exact: customer " + std::to_string(customers[i]) +
                                " fits no truck under any shift (capacity or range)",
                            customers[i]);
    }
  }

  // Feasible (travel, recharge) options per electric block. Only the Pareto
  // front matters: both objective modes are monotone in travel and recharge.
  std::vector<std::vector<BlockOption>> electric_options(mask_count);
  std::vector<bool> electric_options_ready(mask_count, false);
  auto options_for = [&](std::size_t block) -> const std::vector<BlockOption>& {
    if (electric_options_ready[block]) return electric_options[block];
    std::vector<BlockOption> options;
    const std::size_t eligible = block & ohd_mask;
    // Night subsets of the block's OHD customers; the day segment must stay
    // nonempty because a night departure requires a day departure.
    for (std::size_t night = eligible;; night = (night - 1) & eligible) {
      const std::size_t day = block & ~night;
      if (day != 0) {
        const Minutes day_time = day_table.tour_cost(day);
        const Minutes night_time = night == 0 ? 0 : night_table.tour_cost(night);
        const bool fits = day_time <= instance.trucks.range_electric &&
                          night_time <= instance.trucks.range_electric &&
                          load[day] <= instance.trucks.capacity_electric &&
                          (night == 0 || load[night] <= instance.trucks.capacity_electric);
        if (fits) {
          const Minutes recharge =
              night == 0 ? 0 : min_recharge(day_time, instance.charging.recharge_speed);
          options.push_back({night, day_time + night_time, recharge});
        }
      }
      if (night == 0) break;
    }
    std::sort(options.begin(), options.end(), [](const BlockOption& a, const BlockOption& b) {
      return std::tie(a.travel, a.recharge, a.night_mask) <
             std::tie(b.travel, b.recharge, b.night_mask);
    });
    std::vector<BlockOption> pruned;
    Minutes best_recharge = kInf;
    for (const BlockOption& option : options) {
      if (option.recharge < best_recharge) {
        pruned.push_back(option);
        best_recharge = option.recharge;
      }
    }
    electric_options[block] = std::move(pruned);
    electric_options_ready[block] = true;
    return electric_options[block];
  };

  struct Best {
    bool found = false;
    Score score{};
    int truck_count = 0;
    std::vector<std::int64_t> assignment_key;
    std::vector<BlockChoice> blocks;
  } best;

  std::uint64_t configurations = 0;
  std::uint64_t partitions_seen = 0;

  std::vector<int> rgs(n, 0);  // restricted growth string: customer -> block
  std::vector<std::size_t> block_masks;
  std::vector<BlockChoice> choice;

  auto consider = [&](int m) {
    for (std::size_t engines = 0; engines < (std::size_t{1} << m); ++engines) {
      const int electric_count = std::popcount(engines);
      const int conventional_count = m - electric_count;
      if (conventional_count > instance.trucks.max_conventional) continue;
      if (electric_count > instance.trucks.max_electric) continue;

      ++configurations;
      bool valid = true;
      Minutes conventional_travel = 0;
      std::vector<std::size_t> electric_blocks;
      for (int b = 0; b < m && valid; ++b) {
        const std::size_t mask = block_masks[static_cast<std::size_t>(b)];
        if (engines & (std::size_t{1} << b)) {
          if (options_for(mask).empty()) valid = false;
          electric_blocks.push_back(static_cast<std::size_t>(b));
        } else {
          const Minutes t = day_table.tour_cost(mask);
          if (t > instance.trucks.range_conventional ||
              load[mask] > instance.trucks.capacity_conventional) {
            valid = false;
          } else {
            conventional_travel += t;
          }
        }
      }
      if (!valid) continue;

      choice.assign(static_cast<std::size_t>(m), BlockChoice{});
      for (int b = 0; b < m; ++b) {
        choice[static_cast<std::size_t>(b)].engine =
            (engines & (std::size_t{1} << b)) ? Engine::electric : Engine::conventional;
        choice[static_cast<std::size_t>(b)].day_mask = block_masks[static_cast<std::size_t>(b)];
      }

      const Cost truck_cost = instance.costs.tco_conventional * conventional_count +
                              instance.costs.tco_electric * electric_count;

      // Joint odometer over the electric blocks' split options; the EVSE term
      // couples the blocks through the recharge sum.
      std::vector<std::size_t> option_index(electric_blocks.size(), 0);
      while (true) {
        Minutes travel = conventional_travel;
        Minutes recharge_total = 0;
        for (std::size_t e = 0; e < electric_blocks.size(); ++e) {
          const std::size_t b = electric_blocks[e];
          const BlockOption& option = options_for(block_masks[b])[option_index[e]];
          travel += option.travel;
          recharge_total += option.recharge;
          choice[b].night_mask = option.night_mask;
          choice[b].day_mask = block_masks[b] & ~option.night_mask;
        }
        const int evse =
            recharge_total == 0
                ? 0
                : static_cast<int>((recharge_total + instance.charging.break_window - 1) /
                                   instance.charging.break_window);
        const Score score{truck_cost + instance.costs.evse_cost * evse, travel,
                          instance.costs.objective_mode};
        bool take = false;
        if (!best.found || score < best.score) {
          take = true;
        } else if (score == best.score) {
          if (m < best.truck_count) {
            take = true;
          } else if (m == best.truck_count) {
            take = make_assignment_key(choice) < best.assignment_key;
          }
        }
        if (take) {
          best.found = true;
          best.score = score;
          best.truck_count = m;
          best.blocks = choice;
          best.assignment_key = make_assignment_key(choice);
        }

        std::size_t pos = 0;
        for (; pos < electric_blocks.size(); ++pos) {
          if (++option_index[pos] < options_for(block_masks[electric_blocks[pos]]).size()) {
            break;
          }
          option_index[pos] = 0;
        }
        if (pos == electric_blocks.size()) break;
      }
    }
  };

  // Restricted growth strings enumerate set partitions with blocks ordered by
  // smallest customer; labels are capped to bound the block count.
  while (true) {
    int m = 0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, rgs[i] + 1);
    block_masks.assign(static_cast<std::size_t>(m), 0);
    for (std::size_t i = 0; i < n; ++i) {
      block_masks[static_cast<std::size_t>(rgs[i])] |= std::size_t{1} << i;
    }
    consider(m);

    if ((++partitions_seen & 0xFFu) == 0 &&
        std::chrono::steady_clock::now() - start > limits.time_budget) {
      throw LimitError("solve_exact: time budget exceeded");
    }

    bool advanced = false;
    for (std::size_t i = n; i-- > 1;) {
      int prefix_max = 0;
      for (std::size_t j = 0; j < i; ++j) prefix_max = std::max(prefix_max, rgs[j]);
      if (rgs[i] <= prefix_max && rgs[i] < max_blocks - 1) {
        ++rgs[i];
        std::fill(rgs.begin() + static_cast<std::ptrdiff_t>(i) + 1, rgs.end(), 0);
        advanced = true;
        break;
      }
    }
    if (!advanced) break;
  }

  if (!best.found) {
    throw InfeasibleError("solve_exact: no feasible assignment within fleet bounds");
  }

  Solution solution;
  std::vector<Minutes> recharge_times;
  for (const BlockChoice& block : best.blocks) {
    TruckPlan truck;
    truck.engine = block.engine;
    truck.day_route = day_table.reconstruct(block.day_mask);
    if (block.night_mask != 0) {
      truck.night_route = night_table.reconstruct(block.night_mask);
      truck.recharge_time =
          min_recharge(day_table.tour_cost(block.day_mask), instance.charging.recharge_speed);
      recharge_times.push_back(truck.recharge_time);
    }
    solution.trucks.push_back(std::move(truck));
  }
  solution.evse_count = required_evse_count(recharge_times, instance.charging.break_window);

  return {std::move(solution), best.score, configurations};
}

}  // namespace evrp
