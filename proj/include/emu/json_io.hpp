#pragma once

#include <fstream>
#include <string>

#include "json.hpp"

#include "emu/instance.hpp"

namespace emu {

using Json = nlohmann::json;

inline Rat parse_weight(const Json& v) {
    if (v.is_string()) return Rat::parse(v.get<std::string>());
    if (v.is_number_integer()) return Rat(v.get<std::int64_t>());
    throw input_error("edge weight must be a string or integer, got: " + v.dump());
}

inline Json weight_to_json(const Rat& w) { return w.to_string(); }

inline PlanarGraph graph_from_json(const Json& j, bool allow_zero) {
    EMU_INPUT_CHECK(j.is_object(), "graph JSON must be an object");
    EMU_INPUT_CHECK(j.contains("vertices") && j.contains("edges") && j.contains("rotation"),
                    "graph JSON needs vertices, edges and rotation");
    PlanarGraph g(allow_zero);
    for (const Json& v : j.at("vertices")) {
        EMU_INPUT_CHECK(v.is_number_integer(), "vertex ids must be integers");
        g.add_vertex(v.get<int>());
    }
    for (const Json& e : j.at("edges")) {
        EMU_INPUT_CHECK(e.contains("id") && e.contains("u") && e.contains("v") && e.contains("w"),
                        "edge JSON needs id, u, v, w");
        g.add_edge(e.at("id").get<int>(), e.at("u").get<int>(), e.at("v").get<int>(),
                   parse_weight(e.at("w")));
    }
    const Json& rot = j.at("rotation");
    EMU_INPUT_CHECK(rot.is_object(), "rotation must be an object keyed by vertex id");
    for (auto it = rot.begin(); it != rot.end(); ++it) {
        int vid = std::stoi(it.key());
        std::vector<int> eids;
        for (const Json& e : it.value()) eids.push_back(e.get<int>());
        g.set_rotation(vid, eids);
    }
    for (int vid : g.vertex_ids()) {
        EMU_INPUT_CHECK(static_cast<std::size_t>(g.degree(vid)) > 0 || g.vertex_count() == 1,
                        "isolated vertex " + std::to_string(vid));
    }
    return g;
}

inline Json graph_to_json(const PlanarGraph& g) {
    Json j;
    j["vertices"] = g.vertex_ids();
    Json edges = Json::array();
    for (const auto& e : g.edges()) {
        edges.push_back({{"id", e.id}, {"u", e.u}, {"v", e.v}, {"w", weight_to_json(e.w)}});
    }
    j["edges"] = std::move(edges);
    Json rot = Json::object();
    for (int vid : g.vertex_ids()) rot[std::to_string(vid)] = g.rotation_ids(vid);
    j["rotation"] = std::move(rot);
    return j;
}

inline TerminalInstance instance_from_json(const Json& j, bool allow_zero = false) {
    TerminalInstance inst(allow_zero);
    inst.g = graph_from_json(j, allow_zero);
    EMU_INPUT_CHECK(j.contains("outer_face_walk"), "instance JSON needs outer_face_walk");
    for (const Json& e : j.at("outer_face_walk")) inst.outer_walk.push_back(e.get<int>());
    if (j.contains("faces")) {
        for (const Json& f : j.at("faces")) {
            FaceSpec spec;
            for (const Json& e : f.at("face_walk")) spec.walk_edge_ids.push_back(e.get<int>());
            for (const Json& t : f.at("terminals")) spec.terminals_cw.push_back(t.get<int>());
            inst.faces.push_back(std::move(spec));
        }
    }
    return inst;
}

inline Json instance_to_json(const TerminalInstance& inst) {
    Json j = graph_to_json(inst.g);
    j["outer_face_walk"] = inst.outer_walk;
    Json faces = Json::array();
    for (const FaceSpec& f : inst.faces) {
        faces.push_back({{"face_walk", f.walk_edge_ids}, {"terminals", f.terminals_cw}});
    }
    j["faces"] = std::move(faces);
    return j;
}

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    EMU_INPUT_CHECK(in.good(), "cannot open file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw input_error("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

inline void save_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    EMU_INPUT_CHECK(out.good(), "cannot open file for writing: " + path);
    out << j.dump(2) << "\n";
}

} // namespace emu
