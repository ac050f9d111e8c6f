// Copyright 2026 The Toskose Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "toskose/tosca/topology.hpp"

#include <algorithm>
#include <functional>

#include "toskose/common/fs.hpp"

namespace toskose::tosca {
namespace {

bool allowed_container_property(const std::string& name) {
  return std::find(std::begin(kContainerProperties), std::end(kContainerProperties), name) !=
         std::end(kContainerProperties);
}

bool relationship_kinds_ok(RelKind kind, NodeKind s, NodeKind d) {
  switch (kind) {
    case RelKind::attaches_to:
      return s == NodeKind::container && d == NodeKind::volume;
    case RelKind::hosted_on:
      return s == NodeKind::software && d != NodeKind::volume;
    case RelKind::connects_to:
    case RelKind::depends_on:
      return s != NodeKind::volume && d != NodeKind::volume;
  }
  return false;
}

// Nodes lying on a HostedOn cycle, one representative (smallest name) per
// strongly connected component with a cycle.
std::vector<std::string> host_cycles(const ServiceTemplate& t) {
  std::map<std::string, std::vector<std::string>> edges;
  for (const auto& r : t.relationships) {
    if (r.kind == RelKind::hosted_on && t.find(r.target) != nullptr) {
      edges[r.source].push_back(r.target);
    }
  }
  // Tarjan's SCC.
  std::map<std::string, int> index, low;
  std::set<std::string> on_stack;
  std::vector<std::string> stack;
  std::vector<std::string> reps;
  int counter = 0;
  std::function<void(const std::string&)> visit = [&](const std::string& v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack.insert(v);
    for (const auto& w : edges[v]) {
      if (!index.contains(w)) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack.contains(w)) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::string> scc;
      std::string w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        scc.push_back(w);
      } while (w != v);
      const auto& self = edges[v];
      const bool cyclic =
          scc.size() > 1 || std::find(self.begin(), self.end(), v) != self.end();
      if (cyclic) reps.push_back(*std::min_element(scc.begin(), scc.end()));
    }
  };
  for (const auto& n : t.nodes) {
    if (!index.contains(n.name)) visit(n.name);
  }
  std::sort(reps.begin(), reps.end());
  return reps;
}

}  // namespace

ValidationReport validate_topology(const ServiceTemplate& t) {
  ValidationReport report;

  std::set<std::string> seen;
  for (const auto& n : t.nodes) {
    if (!seen.insert(n.name).second) {
      report.add(std::string(diag::kDuplicateNode), n.name, "node name declared more than once");
    }
  }

  for (const auto& r : t.relationships) {
    const auto* s = t.find(r.source);
    const auto* d = t.find(r.target);
    if (s == nullptr || d == nullptr) {
      report.add(std::string(diag::kUnresolvedTarget), r.source,
                 std::string(to_string(r.kind)) + " " + r.source + " -> " + r.target +
                     " names a missing node");
      continue;
    }
    if (!relationship_kinds_ok(r.kind, s->kind, d->kind)) {
      report.add(std::string(diag::kInvalidRelationship), r.source,
                 std::string(to_string(r.kind)) + " from " + std::string(to_string(s->kind)) +
                     " '" + r.source + "' to " + std::string(to_string(d->kind)) + " '" +
                     r.target + "' is not allowed");
    }
    if (r.kind == RelKind::attaches_to && r.location.empty()) {
      report.add(std::string(diag::kAttachMissingLocation), r.source,
                 "AttachesTo " + r.source + " -> " + r.target + " has no mount location");
    }
  }

  for (const auto& n : t.nodes) {
    switch (n.kind) {
      case NodeKind::container:
        for (const auto& [key, _] : n.properties.items()) {
          if (!allowed_container_property(key)) {
            report.add(std::string(diag::kContainerProperty), n.name,
                       "container property '" + key + "' is not one of ports, env_variables, command, share_data");
          }
        }
        break;
      case NodeKind::software: {
        auto hosts = t.outgoing(n.name, RelKind::hosted_on);
        if (hosts.empty()) {
          report.add(std::string(diag::kSoftwareWithoutHost), n.name,
                     "software component '" + n.name + "' is not hosted on anything");
        } else if (hosts.size() > 1) {
          report.add(std::string(diag::kSoftwareMultipleHosts), n.name,
                     "software component '" + n.name + "' has " + std::to_string(hosts.size()) +
                         " HostedOn relationships");
        }
        auto allowed = t.allowed_operations(n);
        for (const auto& op : n.interface.operations) {
          if (std::find(allowed.begin(), allowed.end(), op.name) == allowed.end()) {
            report.add(std::string(diag::kUnknownOperation), n.name,
                       "operation '" + op.name + "' is neither standard nor declared by type " +
                           n.type_name);
          }
        }
        break;
      }
      case NodeKind::volume:
        if (!t.outgoing(n.name).empty()) {
          report.add(std::string(diag::kVolumeOutgoing), n.name,
                     "volume '" + n.name + "' has outgoing relationships");
        }
        break;
    }
    for (const auto& op : n.interface.operations) {
      if (!fs::is_contained_relative_path(op.implementation.path)) {
        report.add(std::string(diag::kArtifactPath), n.name,
                   "implementation of '" + op.name + "' is not an archive-relative path: " +
                       op.implementation.path);
      }
    }
  }

  const auto cycles = host_cycles(t);
  for (const auto& rep : cycles) {
    report.add(std::string(diag::kHostCycle), rep, "HostedOn relationships form a cycle through '" + rep + "'");
  }

  // Host chains of well-formed software must end at a container.
  if (cycles.empty()) {
    for (const auto& n : t.nodes) {
      if (n.kind != NodeKind::software) continue;
      const NodeTemplate* cur = &n;
      while (cur != nullptr && cur->kind == NodeKind::software) {
        auto hosts = t.outgoing(cur->name, RelKind::hosted_on);
        if (hosts.empty()) break;
        cur = t.find(hosts.front()->target);
      }
      if (cur != nullptr && cur != &n && cur->kind == NodeKind::software) {
        report.add(std::string(diag::kHostChainUnterminated), n.name,
                   "host chain of '" + n.name + "' ends at unhosted software '" + cur->name + "'");
      }
    }
  }
  return report;
}

NodeClassification classify_nodes(const ServiceTemplate& t) {
  NodeClassification out;
  std::map<std::string, std::vector<std::pair<int, std::string>>> hosted;
  for (const auto& n : t.nodes) {
    if (n.kind != NodeKind::software) continue;
    int depth = 0;
    const NodeTemplate* cur = &n;
    while (cur != nullptr && cur->kind == NodeKind::software) {
      auto hosts = t.outgoing(cur->name, RelKind::hosted_on);
      if (hosts.empty() || depth > static_cast<int>(t.nodes.size())) {
        cur = nullptr;
        break;
      }
      cur = t.find(hosts.front()->target);
      ++depth;
    }
    if (cur != nullptr && cur->kind == NodeKind::container) {
      hosted[cur->name].emplace_back(depth, n.name);
      out.host_container[n.name] = cur->name;
    }
  }
  for (const auto& n : t.nodes) {
    if (n.kind != NodeKind::container) continue;
    auto it = hosted.find(n.name);
    if (it == hosted.end()) {
      out.standalone.insert(n.name);
      continue;
    }
    auto items = it->second;
    std::sort(items.begin(), items.end());
    auto& list = out.hosting[n.name];
    for (auto& [_, name] : items) list.push_back(std::move(name));
  }
  return out;
}

}  // namespace toskose::tosca
