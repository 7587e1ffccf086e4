#pragma once

// Named instances used across the suite plus loading of the frozen fixture
// corpus (tests/fixtures/*.json, regenerated by the search_fixtures tool).

#include <fstream>
#include <sstream>
#include <string>

#include "fracmatch/fracmatch.hpp"

namespace fixtures {

using fracmatch::MatchingInstance;
using fracmatch::Rational;

inline fracmatch::Matrix mat(std::initializer_list<std::initializer_list<long>> rows) {
    fracmatch::Matrix out;
    for (const auto& row : rows) {
        std::vector<Rational> r;
        for (long v : row) r.emplace_back(v);
        out.push_back(std::move(r));
    }
    return out;
}

/// Everyone's first choice is mutual: (m0,w0), (m1,w1).
inline MatchingInstance soul() {
    MatchingInstance inst;
    inst.n = 2;
    inst.U = mat({{2, 1}, {1, 2}});
    inst.V = mat({{2, 1}, {1, 2}});
    return inst;
}

/// Men's firsts and women's firsts disagree; no MFP pair, two stable
/// matchings (identity men-optimal, swap women-optimal).
inline MatchingInstance conflict() {
    MatchingInstance inst;
    inst.n = 2;
    inst.U = mat({{2, 1}, {1, 2}});
    inst.V = mat({{1, 2}, {2, 1}});  // V[i][j] = w_j's value for m_i
    return inst;
}

/// Both men prefer w0; both women prefer m0. The swap matching is blocked
/// by (m0, w0).
inline MatchingInstance block() {
    MatchingInstance inst;
    inst.n = 2;
    inst.U = mat({{2, 1}, {2, 1}});
    inst.V = mat({{2, 2}, {1, 1}});
    return inst;
}

/// Popularity: all men rank w0 > w1 > w2, all women rank m0 > m1 > m2.
/// Algorithm 1 extracts (m0,w0), (m1,w1), (m2,w2) in rounds 1, 2, 3.
inline MatchingInstance pop() {
    MatchingInstance inst;
    inst.n = 3;
    inst.U = mat({{3, 2, 1}, {3, 2, 1}, {3, 2, 1}});
    inst.V = mat({{3, 3, 3}, {2, 2, 2}, {1, 1, 1}});
    return inst;
}

inline std::string fixture_dir() {
#ifdef FRACMATCH_FIXTURE_DIR
    return FRACMATCH_FIXTURE_DIR;
#else
    return "tests/fixtures";
#endif
}

inline fracmatch::Json load_json(const std::string& name) {
    const std::string path = fixture_dir() + "/" + name;
    std::ifstream in(path);
    if (!in) throw fracmatch::Error("missing fixture: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return fracmatch::Json::parse(buf.str());
}

inline MatchingInstance load_instance(const std::string& name) {
    const fracmatch::Json j = load_json(name);
    return fracmatch::instance_from_json(j.contains("instance") ? j["instance"] : j);
}

}  // namespace fixtures
