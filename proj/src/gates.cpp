#include "tt/gates.hpp"

#include <algorithm>

namespace tt {

GateStructure gate_structure(const GraphMap& f) {
    std::vector<int> dirs;
    for (int e = 1; e <= f.g.num_edges(); ++e) {
        if (f.eimage[e - 1].empty())
            throw collapsed_edge_image("edge " + std::to_string(e) + " maps to a vertex");
        dirs.push_back(e);
        dirs.push_back(-e);
    }
    GateStructure gs;
    for (int d : dirs) gs.dmap[d] = f.dmap(d);

    // the partitions by the value of Df^k coarsen with k and stabilize; the
    // stable one is the gate relation
    std::map<int, int> cur;  // direction -> Df^k(direction)
    for (int d : dirs) cur[d] = d;
    std::map<int, int> cls;
    for (std::size_t step = 0; step <= dirs.size() + 1; ++step) {
        for (int d : dirs) cur[d] = gs.dmap.at(cur[d]);
        std::map<int, int> value_to_id;
        std::map<int, int> next_cls;
        for (int d : dirs) {
            auto [it, fresh] = value_to_id.emplace(cur[d], static_cast<int>(value_to_id.size()));
            next_cls[d] = it->second;
        }
        if (next_cls == cls) break;
        cls = std::move(next_cls);
    }

    // canonical gate ids per vertex
    gs.gates_at.assign(f.g.num_vertices(), {});
    std::map<int, int> cls_to_gate;
    int next_gate = 0;
    for (int v = 0; v < f.g.num_vertices(); ++v) {
        std::map<int, std::vector<int>> groups;
        for (int d : f.g.directions_at(v)) groups[cls[d]].push_back(d);
        for (auto& [c, group] : groups) {
            int gid = next_gate++;
            std::sort(group.begin(), group.end());
            group.erase(std::unique(group.begin(), group.end()), group.end());
            for (int d : group) gs.gate_of[d] = gid;
            gs.gates_at[v].push_back(group);
        }
    }
    return gs;
}

int illegal_count(const EdgePath& rho, const MarkedGraph& g, const GateStructure& gates) {
    (void)g;
    int count = 0;
    for (std::size_t i = 0; i + 1 < rho.size(); ++i)
        if (!gates.legal_turn(-rho[i], rho[i + 1])) ++count;
    return count;
}

bool path_legal(const EdgePath& rho, const MarkedGraph& g, const GateStructure& gates) {
    return illegal_count(rho, g, gates) == 0;
}

std::vector<EdgePath> legal_segments(const EdgePath& rho, const MarkedGraph& g,
                                     const GateStructure& gates) {
    (void)g;
    std::vector<EdgePath> out;
    EdgePath cur;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (!cur.empty() && !gates.legal_turn(-cur.back(), rho[i])) {
            out.push_back(std::move(cur));
            cur.clear();
        }
        cur.push_back(rho[i]);
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

TrainTrackCheck check_train_track(const GraphMap& f) {
    TrainTrackCheck c;
    GateStructure gs = gate_structure(f);
    c.edge_images_legal = true;
    for (int e = 1; e <= f.g.num_edges(); ++e)
        if (!path_legal(f.eimage[e - 1], f.g, gs)) c.edge_images_legal = false;
    c.two_gates_everywhere = true;
    for (int v = 0; v < f.g.num_vertices(); ++v)
        if (gs.gate_count(v) < 2) c.two_gates_everywhere = false;
    c.gate_map_injective = true;
    for (int v = 0; v < f.g.num_vertices(); ++v) {
        const auto& gates = gs.gates_at[v];
        for (std::size_t i = 0; i < gates.size(); ++i)
            for (std::size_t j = i + 1; j < gates.size(); ++j) {
                int d1 = gates[i].front(), d2 = gates[j].front();
                if (!gs.legal_turn(gs.dmap.at(d1), gs.dmap.at(d2))) c.gate_map_injective = false;
            }
    }
    return c;
}

}  // namespace tt
