#include "gridattack/types.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "gridattack/errors.hpp"

namespace gridattack::core {

int NetworkCase::bus_index(int bus_id) const {
  for (std::size_t i = 0; i < buses.size(); ++i) {
    if (buses[i].id == bus_id) return static_cast<int>(i);
  }
  return -1;
}

void NetworkCase::validate() const {
  if (buses.empty()) throw ModelError("case has no buses");
  int slack_count = 0;
  std::set<int> ids;
  for (const Bus& b : buses) {
    if (!ids.insert(b.id).second) throw ModelError("duplicate bus id " + std::to_string(b.id));
    if (b.type == BusType::Slack) ++slack_count;
  }
  if (slack_count != 1) {
    throw ModelError("expected exactly one slack bus, found " + std::to_string(slack_count));
  }
  for (const Branch& br : branches) {
    if (bus_index(br.from) < 0 || bus_index(br.to) < 0) {
      throw ModelError("branch " + std::to_string(br.from) + "-" + std::to_string(br.to) +
                       " references unknown bus");
    }
    if (br.x == 0.0) {
      throw ModelError("branch " + std::to_string(br.from) + "-" + std::to_string(br.to) +
                       " has zero reactance");
    }
  }
  // connectivity over the branch graph
  std::vector<std::vector<int>> adj(buses.size());
  for (const Branch& br : branches) {
    adj[bus_index(br.from)].push_back(bus_index(br.to));
    adj[bus_index(br.to)].push_back(bus_index(br.from));
  }
  std::vector<bool> seen(buses.size(), false);
  std::vector<int> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  if (!std::all_of(seen.begin(), seen.end(), [](bool s) { return s; })) {
    throw ModelError("branch graph is not connected");
  }

  auto has_for_bus = [](const auto& items, int bus) {
    return std::any_of(items.begin(), items.end(),
                       [bus](const auto& it) { return it.bus == bus; });
  };
  for (const MachineParams& m : machines) {
    if (bus_index(m.bus) < 0) {
      throw ModelError("machine references unknown bus " + std::to_string(m.bus));
    }
    if (!(m.xd >= m.xd1 && m.xd1 >= m.xd2 && m.xd2 > m.xl && m.xl >= 0.0)) {
      throw ModelError("machine at bus " + std::to_string(m.bus) +
                       ": reactance ordering xd >= xd1 >= xd2 > xl >= 0 violated");
    }
    if (m.td10 <= 0 || m.tq10 <= 0 || m.td20 <= 0 || m.tq20 <= 0 || m.h <= 0) {
      throw ModelError("machine at bus " + std::to_string(m.bus) +
                       ": nonpositive time constant or inertia");
    }
    if (!has_for_bus(governors, m.bus)) {
      throw ModelError("machine at bus " + std::to_string(m.bus) + " has no governor");
    }
    if (!has_for_bus(exciters, m.bus)) {
      throw ModelError("machine at bus " + std::to_string(m.bus) + " has no exciter");
    }
  }
  for (const GovernorParams& g : governors) {
    if (g.r <= 0) throw ModelError("governor droop must be positive");
    if (g.vmin >= g.vmax) throw ModelError("governor valve limits inverted");
    if (g.t1 <= 0 || g.t3 <= 0) throw ModelError("governor time constants must be positive");
  }
  for (const ExciterParams& e : exciters) {
    if (e.ta <= 0 || e.te <= 0 || e.tf <= 0) {
      throw ModelError("exciter time constants must be positive");
    }
    if (e.vrmin >= e.vrmax) throw ModelError("exciter regulator limits inverted");
  }
}

}  // namespace gridattack::core
