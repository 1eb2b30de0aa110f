#pragma once

#include <string>
#include <vector>

#include "emu/glue.hpp"
#include "emu/instance.hpp"

namespace emu {

struct VerifyRow {
    int s = -1, t = -1;
    Rat dist_g, dist_h;
    bool equal = false;
};

struct VerifyReport {
    std::vector<VerifyRow> rows;
    bool all_equal = true;
    bool planar = true;
    std::string planar_error;
    std::size_t emulator_vertices = 0;
    std::size_t input_vertices = 0;

    bool pass() const { return all_equal && planar; }
};

// Exact per-pair comparison against a fresh shortest-path computation on
// the input; never touches pipeline intermediates.
inline VerifyReport verify_emulator(const TerminalInstance& inst, const Emulator& em) {
    VerifyReport rep;
    rep.emulator_vertices = em.g.vertex_count();
    rep.input_vertices = inst.g.vertex_count();
    try {
        em.g.validate_rotations();
        auto fs = em.g.trace_faces();
        em.g.check_euler(fs);
    } catch (const std::exception& e) {
        rep.planar = false;
        rep.planar_error = e.what();
    }
    std::vector<int> terms = inst.all_terminals();
    for (std::size_t i = 0; i < terms.size(); ++i) {
        PathTree gt(inst.g, terms[i]);
        auto it = em.terminal_vertex.find(terms[i]);
        EMU_INPUT_CHECK(it != em.terminal_vertex.end(),
                        "emulator lacks terminal " + std::to_string(terms[i]));
        PathTree ht(em.g, it->second);
        for (std::size_t j = i + 1; j < terms.size(); ++j) {
            VerifyRow row;
            row.s = terms[i];
            row.t = terms[j];
            row.dist_g = gt.dist(terms[j]);
            row.dist_h = ht.dist(em.terminal_vertex.at(terms[j]));
            row.equal = row.dist_g == row.dist_h;
            if (!row.equal) rep.all_equal = false;
            rep.rows.push_back(std::move(row));
        }
    }
    return rep;
}

} // namespace emu
