#include "simplicial.hpp"

#include "koszul.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace cohoch {

/* ------------------------------- Simp calculus ------------------------------- */

bool Simp::in_image_of(int i) const {
    return std::find(degen.begin(), degen.end(), i) != degen.end();
}

Simp SSet::degeneracy_of(const Simp& x, int i) {
    // s_i s_J: indices >= i shift up by one, then i joins the set
    Simp r;
    r.base_dim = x.base_dim;
    r.base_idx = x.base_idx;
    r.degen.reserve(x.degen.size() + 1);
    for (int a : x.degen) r.degen.push_back(a >= i ? a + 1 : a);
    r.degen.push_back(i);
    std::sort(r.degen.begin(), r.degen.end(), std::greater<int>());
    return r;
}

Simp SSet::face_of(const Simp& x, int i) const {
    if (!x.degenerate()) {
        if (x.base_dim <= 0) fail("MalformedDocument", "face of a vertex requested");
        return face[x.base_dim][x.base_idx][i];
    }
    const int j = x.degen.front();  // outermost degeneracy
    Simp inner = x;
    inner.degen.erase(inner.degen.begin());
    if (i == j || i == j + 1) return inner;                      // d_j s_j = d_{j+1} s_j = id
    if (i < j) return degeneracy_of(face_of(inner, i), j - 1);   // d_i s_j = s_{j-1} d_i
    return degeneracy_of(face_of(inner, i - 1), j);              // d_i s_j = s_j d_{i-1}
}

std::string SSet::str(const Simp& x) const {
    std::string r;
    for (int a : x.degen) r += "s" + std::to_string(a);
    return r + names[x.base_dim][x.base_idx];
}

int SSet::id_of(int d, const std::string& nm) const {
    if (d < 0 || d > dim_top()) return -1;
    for (int i = 0; i < static_cast<int>(names[d].size()); ++i)
        if (names[d][i] == nm) return i;
    return -1;
}

namespace {

/* all strictly increasing size-k subsets of positions, lexicographically */
void subsets_rec(const std::vector<int>& positions, int k, int start, std::vector<int>& cur,
                 std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == k) {
        out.push_back(cur);
        return;
    }
    int need = k - static_cast<int>(cur.size());
    for (int i = start; i + need <= static_cast<int>(positions.size()); ++i) {
        cur.push_back(positions[i]);
        subsets_rec(positions, k, i + 1, cur, out);
        cur.pop_back();
    }
}

std::vector<std::vector<int>> subsets_of(const std::vector<int>& positions, int k) {
    std::vector<std::vector<int>> out;
    if (k < 0 || k > static_cast<int>(positions.size())) return out;
    std::vector<int> cur;
    subsets_rec(positions, k, 0, cur, out);
    return out;
}

std::vector<int> iota_vec(int n) {
    std::vector<int> v(n);
    for (int i = 0; i < n; ++i) v[i] = i;
    return v;
}

/* a strictly increasing index list as a strictly decreasing degeneracy list */
std::vector<int> descending(std::vector<int> v) {
    std::reverse(v.begin(), v.end());
    return v;
}

}  // namespace

std::vector<Simp> SSet::all_simplices(int d) const {
    std::vector<Simp> out;
    for (int b = 0; b <= std::min(d, dim_top()); ++b) {
        auto js = subsets_of(iota_vec(d), d - b);
        for (int idx = 0; idx < count(b); ++idx)
            for (const auto& j : js) out.push_back(Simp{descending(j), b, idx});
    }
    return out;
}

void SSet::validate() const {
    if (names.empty() || names[0].empty())
        fail("MalformedDocument", name + ": a simplicial set needs at least one vertex");
    if (dim_top() > dim_cap)
        fail("MalformedDocument", name + ": dimension " + std::to_string(dim_top()) +
                                      " exceeds the cap " + std::to_string(dim_cap));
    if (static_cast<int>(face.size()) < static_cast<int>(names.size()))
        fail("MalformedDocument", name + ": face table shorter than the simplex table");
    for (int d = 1; d <= dim_top(); ++d) {
        if (face[d].size() != names[d].size())
            fail("MalformedDocument",
                 name + ": face table at dimension " + std::to_string(d) + " has " +
                     std::to_string(face[d].size()) + " rows for " +
                     std::to_string(names[d].size()) + " simplices");
        for (int i = 0; i < count(d); ++i) {
            if (static_cast<int>(face[d][i].size()) != d + 1)
                fail("MalformedDocument", name + ": " + names[d][i] + " needs " +
                                              std::to_string(d + 1) + " faces, has " +
                                              std::to_string(face[d][i].size()));
            for (int k = 0; k <= d; ++k) {
                const Simp& f = face[d][i][k];
                if (f.dim() != d - 1)
                    fail("MalformedDocument", name + ": face " + std::to_string(k) + " of " +
                                                  names[d][i] + " has dimension " +
                                                  std::to_string(f.dim()));
                if (f.base_dim < 0 || f.base_dim > dim_top() || f.base_idx < 0 ||
                    f.base_idx >= count(f.base_dim))
                    fail("MalformedDocument",
                         name + ": face " + std::to_string(k) + " of " + names[d][i] +
                             " references an unknown simplex");
                for (size_t a = 0; a + 1 < f.degen.size(); ++a)
                    if (f.degen[a] <= f.degen[a + 1])
                        fail("MalformedDocument", name + ": face " + std::to_string(k) + " of " +
                                                      names[d][i] +
                                                      " has a non-normalized degeneracy list");
                if (!f.degen.empty() && (f.degen.front() > d - 2 || f.degen.back() < 0))
                    fail("MalformedDocument", name + ": face " + std::to_string(k) + " of " +
                                                  names[d][i] +
                                                  " has a degeneracy index out of range");
            }
        }
    }
    for (int d = 2; d <= dim_top(); ++d)
        for (int i = 0; i < count(d); ++i) {
            Simp x{{}, d, i};
            for (int a = 0; a < d; ++a)
                for (int b = a + 1; b <= d; ++b) {
                    Simp lhs = face_of(face_of(x, b), a);
                    Simp rhs = face_of(face_of(x, a), b - 1);
                    if (!(lhs == rhs))
                        fail("SimplicialIdentityViolation",
                             name + ": d_" + std::to_string(a) + " d_" + std::to_string(b) +
                                 " != d_" + std::to_string(b - 1) + " d_" + std::to_string(a) +
                                 " on " + names[d][i] + "  (" + str(lhs) + " vs " + str(rhs) +
                                 ")");
                }
        }
}

/* ------------------------------- parsing ------------------------------- */

namespace {

using nlohmann::json;

Simp resolve_cell(const SSet& s, int want_dim, const std::vector<int>& degens,
                  const std::string& base, const std::map<std::string, std::pair<int, int>>& by_name,
                  const std::string& where) {
    for (size_t a = 0; a + 1 < degens.size(); ++a)
        if (degens[a] <= degens[a + 1])
            fail("MalformedDocument",
                 where + ": degeneracy list must be strictly decreasing");
    for (int a : degens)
        if (a < 0) fail("MalformedDocument", where + ": negative degeneracy index");
    auto it = by_name.find(base);
    if (it == by_name.end()) fail("MalformedDocument", where + ": unknown simplex '" + base + "'");
    auto [bd, bi] = it->second;
    if (bd + static_cast<int>(degens.size()) != want_dim)
        fail("MalformedDocument", where + ": '" + base + "' with " +
                                      std::to_string(degens.size()) +
                                      " degeneracies does not land in dimension " +
                                      std::to_string(want_dim));
    (void)s;
    return Simp{degens, bd, bi};
}

}  // namespace

SSet parse_simplicial_set(const std::string& json_text, int dim_cap) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const std::exception& e) {
        fail("MalformedDocument", std::string("not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("simplices") || !doc["simplices"].is_object())
        fail("MalformedDocument", "expected an object with a \"simplices\" table");

    SSet s;
    s.dim_cap = dim_cap;
    s.name = doc.value("name", std::string("unnamed"));

    int top = -1;
    std::map<int, std::vector<std::string>> per_dim;
    for (auto& [key, val] : doc["simplices"].items()) {
        int d = -1;
        try {
            size_t used = 0;
            d = std::stoi(key, &used);
            if (used != key.size()) d = -1;
        } catch (...) {
            d = -1;
        }
        if (d < 0) fail("MalformedDocument", "bad dimension key '" + key + "'");
        if (d > dim_cap)
            fail("MalformedDocument", "dimension " + key + " exceeds the cap " +
                                          std::to_string(dim_cap));
        if (!val.is_array()) fail("MalformedDocument", "simplices[" + key + "] must be a list");
        for (auto& nm : val) {
            if (!nm.is_string()) fail("MalformedDocument", "simplex names must be strings");
            per_dim[d].push_back(nm.get<std::string>());
        }
        top = std::max(top, d);
    }
    if (top < 0 || per_dim.count(0) == 0 || per_dim[0].empty())
        fail("MalformedDocument", "a simplicial set needs at least one vertex");

    s.names.assign(top + 1, {});
    std::map<std::string, std::pair<int, int>> by_name;
    for (auto& [d, lst] : per_dim) {
        s.names[d] = lst;
        for (int i = 0; i < static_cast<int>(lst.size()); ++i) {
            if (by_name.count(lst[i]))
                fail("MalformedDocument", "duplicate simplex name '" + lst[i] + "'");
            by_name[lst[i]] = {d, i};
        }
    }

    s.face.assign(top + 1, {});
    json faces = doc.value("faces", json::object());
    if (!faces.is_object()) fail("MalformedDocument", "\"faces\" must be an object");
    for (auto& [key, val] : faces.items())
        if (!by_name.count(key))
            fail("MalformedDocument", "faces given for unknown simplex '" + key + "'");

    for (int d = 1; d <= top; ++d) {
        s.face[d].resize(s.names[d].size());
        for (int i = 0; i < s.count(d); ++i) {
            const std::string& nm = s.names[d][i];
            if (!faces.contains(nm))
                fail("MalformedDocument", "missing face list for '" + nm + "'");
            const json& lst = faces[nm];
            if (!lst.is_array() || static_cast<int>(lst.size()) != d + 1)
                fail("MalformedDocument", "'" + nm + "' needs exactly " + std::to_string(d + 1) +
                                              " faces");
            for (int k = 0; k <= d; ++k) {
                const json& e = lst[k];
                if (!e.is_object() || !e.contains("base") || !e["base"].is_string())
                    fail("MalformedDocument", "face " + std::to_string(k) + " of '" + nm +
                                                  "' must be {\"degeneracies\": [...], "
                                                  "\"base\": name}");
                std::vector<int> degs;
                for (auto& g : e.value("degeneracies", json::array())) {
                    if (!g.is_number_integer())
                        fail("MalformedDocument", "degeneracy indices must be integers");
                    degs.push_back(g.get<int>());
                }
                s.face[d][i].push_back(resolve_cell(s, d - 1, degs, e["base"].get<std::string>(),
                                                    by_name,
                                                    "face " + std::to_string(k) + " of '" + nm +
                                                        "'"));
            }
        }
    }

    s.validate();
    return s;
}

SSet load_simplicial_set(const std::string& path, int dim_cap) {
    std::ifstream in(path);
    if (!in) fail("MalformedDocument", "cannot read '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_simplicial_set(buf.str(), dim_cap);
}

/* ------------------------------- standard models ------------------------------- */

SSet sphere(int n, const std::string& name) {
    if (n < 1) fail("MalformedDocument", "sphere dimension must be >= 1");
    SSet s;
    s.name = name.empty() ? "S" + std::to_string(n) : name;
    s.names.assign(n + 1, {});
    s.face.assign(n + 1, {});
    s.names[0] = {"v"};
    s.names[n] = {"c" + std::to_string(n)};
    s.face[n].resize(1);
    Simp collapsed{descending(iota_vec(n - 1)), 0, 0};  // fully degenerate vertex, dim n-1
    for (int k = 0; k <= n; ++k) s.face[n][0].push_back(collapsed);
    s.validate();
    return s;
}

SSet standard_simplex(int n) {
    if (n < 0 || n > 8) fail("MalformedDocument", "standard simplex dimension out of range");
    SSet s;
    s.name = "Delta" + std::to_string(n);
    s.names.assign(n + 1, {});
    s.face.assign(n + 1, {});
    // nondegenerate d-simplices = (d+1)-element vertex subsets, lexicographic
    std::vector<std::vector<std::vector<int>>> cells(n + 1);
    for (int d = 0; d <= n; ++d) {
        cells[d] = subsets_of(iota_vec(n + 1), d + 1);
        for (const auto& c : cells[d]) {
            std::string nm = "d";
            for (int v : c) nm += std::to_string(v);
            s.names[d].push_back(nm);
        }
    }
    for (int d = 1; d <= n; ++d) {
        s.face[d].resize(s.names[d].size());
        for (int i = 0; i < s.count(d); ++i)
            for (int k = 0; k <= d; ++k) {
                std::vector<int> sub = cells[d][i];
                sub.erase(sub.begin() + k);
                auto it = std::find(cells[d - 1].begin(), cells[d - 1].end(), sub);
                s.face[d][i].push_back(
                    Simp{{}, d - 1, static_cast<int>(it - cells[d - 1].begin())});
            }
    }
    s.validate();
    return s;
}

/* ------------------------------- products ------------------------------- */

Simp ProductStructure::normalize_pair(Simp u, Simp v) const {
    std::vector<int> common;  // decreasing, like u.degen
    for (int a : u.degen)
        if (v.in_image_of(a)) common.push_back(a);
    auto strip = [](Simp x, int j) {
        std::vector<int> d2;
        for (int a : x.degen)
            if (a != j) d2.push_back(a > j ? a - 1 : a);
        x.degen = std::move(d2);
        return x;
    };
    for (int c : common) {  // largest first: smaller common indices stay put
        u = strip(u, c);
        v = strip(v, c);
    }
    int d = u.dim();
    auto it = cell_idx[d].find({u, v});
    if (it == cell_idx[d].end())
        fail("MalformedDocument", "product cell lookup failed for (" + prod.name + ")");
    return Simp{common, d, it->second};
}

std::pair<Simp, Simp> ProductStructure::components(const Simp& p) const {
    auto [u, v] = cells[p.base_dim][p.base_idx];
    for (auto it = p.degen.rbegin(); it != p.degen.rend(); ++it) {  // innermost first
        u = SSet::degeneracy_of(u, *it);
        v = SSet::degeneracy_of(v, *it);
    }
    return {u, v};
}

ProductStructure cartesian_product_full(const SSet& k, const SSet& l, int dim_cap) {
    ProductStructure ps;
    int top = std::min(dim_cap, k.dim_top() + l.dim_top());
    ps.prod.name = "(" + k.name + " x " + l.name + ")";
    ps.prod.dim_cap = dim_cap;
    ps.prod.names.assign(top + 1, {});
    ps.prod.face.assign(top + 1, {});
    ps.cells.assign(top + 1, {});
    ps.cell_idx.assign(top + 1, {});

    for (int n = 0; n <= top; ++n)
        for (int p = 0; p <= std::min(n, k.dim_top()); ++p) {
            if (k.count(p) == 0) continue;
            for (int xi = 0; xi < k.count(p); ++xi)
                for (int q = 0; q <= std::min(n, l.dim_top()); ++q) {
                    if (l.count(q) == 0 || (n - p) + (n - q) > n) continue;
                    auto as = subsets_of(iota_vec(n), n - p);
                    for (int yi = 0; yi < l.count(q); ++yi)
                        for (const auto& a : as) {
                            std::vector<int> rest;
                            for (int t = 0; t < n; ++t)
                                if (std::find(a.begin(), a.end(), t) == a.end())
                                    rest.push_back(t);
                            for (const auto& b : subsets_of(rest, n - q)) {
                                Simp u{descending(a), p, xi};
                                Simp v{descending(b), q, yi};
                                ps.cell_idx[n][{u, v}] =
                                    static_cast<int>(ps.cells[n].size());
                                ps.cells[n].push_back({u, v});
                                ps.prod.names[n].push_back("(" + k.str(u) + "," + l.str(v) +
                                                           ")");
                            }
                        }
                }
        }

    for (int n = 1; n <= top; ++n) {
        ps.prod.face[n].resize(ps.cells[n].size());
        for (int i = 0; i < static_cast<int>(ps.cells[n].size()); ++i) {
            const auto& [u, v] = ps.cells[n][i];
            for (int t = 0; t <= n; ++t)
                ps.prod.face[n][i].push_back(
                    ps.normalize_pair(k.face_of(u, t), l.face_of(v, t)));
        }
    }
    ps.prod.validate();
    return ps;
}

SSet cartesian_product(const SSet& k, const SSet& l, int dim_cap) {
    return cartesian_product_full(k, l, dim_cap).prod;
}

/* ------------------------------- suspension ------------------------------- */

SSet simplicial_suspension(const SSet& k) {
    SSet s;
    s.name = "S(" + k.name + ")";
    s.dim_cap = k.dim_cap + 1;
    int top = std::max(k.dim_top() + 1, k.count(0) > 1 ? 1 : 0);
    s.names.assign(top + 1, {});
    s.face.assign(top + 1, {});
    s.names[0] = {"*"};

    // loops for the non-basepoint vertices, then e(x) per positive-dim cell
    std::vector<int> loop_idx(k.count(0), -1);
    for (int v = 1; v < k.count(0); ++v) {
        loop_idx[v] = static_cast<int>(s.names[1].size());
        s.names[1].push_back("e(" + k.names[0][v] + ")");
    }
    std::vector<std::vector<int>> cell_at(k.dim_top() + 1);
    for (int d = 1; d <= k.dim_top(); ++d) {
        cell_at[d].assign(k.count(d), -1);
        for (int i = 0; i < k.count(d); ++i) {
            cell_at[d][i] = static_cast<int>(s.names[d + 1].size());
            s.names[d + 1].push_back("e(" + k.names[d][i] + ")");
        }
    }

    // e on arbitrary simplices of k: e(s_J y) = s_{J+1} e(y), e(basepoint) = s_0 *
    auto susp_of = [&](const Simp& y) {
        Simp z;
        if (y.base_dim == 0)
            z = y.base_idx == 0 ? Simp{{0}, 0, 0} : Simp{{}, 1, loop_idx[y.base_idx]};
        else
            z = Simp{{}, y.base_dim + 1, cell_at[y.base_dim][y.base_idx]};
        for (auto it = y.degen.rbegin(); it != y.degen.rend(); ++it)  // innermost first
            z = SSet::degeneracy_of(z, *it + 1);
        return z;
    };

    s.face[1].resize(s.names[1].size());
    for (int v = 1; v < k.count(0); ++v)
        s.face[1][loop_idx[v]] = {Simp{{}, 0, 0}, Simp{{}, 0, 0}};
    for (int d = 1; d <= k.dim_top(); ++d) {
        int n = d + 1;
        s.face[n].resize(s.names[n].size());
        for (int i = 0; i < k.count(d); ++i) {
            auto& fl = s.face[n][cell_at[d][i]];
            fl.push_back(Simp{descending(iota_vec(n - 1)), 0, 0});  // collapsed basepoint
            for (int t = 1; t <= n; ++t) fl.push_back(susp_of(k.face_of(Simp{{}, d, i}, t - 1)));
        }
    }
    s.validate();
    return s;
}

/* ------------------------------- simplicial maps ------------------------------- */

SMap identity_smap(const SSet& k) {
    SMap g;
    g.img.resize(k.dim_top() + 1);
    for (int d = 0; d <= k.dim_top(); ++d)
        for (int i = 0; i < k.count(d); ++i) g.img[d].push_back(Simp{{}, d, i});
    return g;
}

SMap constant_smap(const SSet& k, const SSet& l) {
    (void)l;
    SMap g;
    g.img.resize(k.dim_top() + 1);
    for (int d = 0; d <= k.dim_top(); ++d)
        for (int i = 0; i < k.count(d); ++i)
            g.img[d].push_back(Simp{descending(iota_vec(d)), 0, 0});
    return g;
}

Simp apply_smap(const SSet& l, const SMap& g, const Simp& x) {
    Simp y = g.img[x.base_dim][x.base_idx];
    (void)l;
    for (auto it = x.degen.rbegin(); it != x.degen.rend(); ++it)  // innermost first
        y = SSet::degeneracy_of(y, *it);
    return y;
}

void validate_smap(const SSet& k, const SSet& l, const SMap& g) {
    if (static_cast<int>(g.img.size()) < k.dim_top() + 1)
        fail("MalformedDocument", "simplicial map is missing dimensions");
    for (int d = 0; d <= k.dim_top(); ++d) {
        if (static_cast<int>(g.img[d].size()) != k.count(d))
            fail("MalformedDocument", "simplicial map has the wrong number of images in dim " +
                                          std::to_string(d));
        for (int i = 0; i < k.count(d); ++i) {
            const Simp& y = g.img[d][i];
            if (y.dim() != d)
                fail("MalformedDocument", "image of " + k.names[d][i] + " has dimension " +
                                              std::to_string(y.dim()));
            if (y.base_dim > l.dim_top() || y.base_idx < 0 || y.base_idx >= l.count(y.base_dim))
                fail("MalformedDocument",
                     "image of " + k.names[d][i] + " references an unknown simplex");
        }
    }
    for (int d = 1; d <= k.dim_top(); ++d)
        for (int i = 0; i < k.count(d); ++i)
            for (int t = 0; t <= d; ++t) {
                Simp lhs = l.face_of(g.img[d][i], t);
                Simp rhs = apply_smap(l, g, k.face_of(Simp{{}, d, i}, t));
                if (!(lhs == rhs))
                    fail("MalformedDocument", "not a simplicial map: d_" + std::to_string(t) +
                                                  " of the image of " + k.names[d][i] + " is " +
                                                  l.str(lhs) + ", expected " + l.str(rhs));
            }
}

SMap parse_simplicial_map(const SSet& k, const SSet& l, const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const std::exception& e) {
        fail("MalformedDocument", std::string("not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("map") || !doc["map"].is_object())
        fail("MalformedDocument", "expected an object with a \"map\" table");
    std::map<std::string, std::pair<int, int>> by_name;
    for (int d = 0; d <= l.dim_top(); ++d)
        for (int i = 0; i < l.count(d); ++i) by_name[l.names[d][i]] = {d, i};

    SMap g;
    g.img.resize(k.dim_top() + 1);
    const json& m = doc["map"];
    for (int d = 0; d <= k.dim_top(); ++d)
        for (int i = 0; i < k.count(d); ++i) {
            const std::string& nm = k.names[d][i];
            if (!m.contains(nm)) fail("MalformedDocument", "map is missing '" + nm + "'");
            const json& e = m[nm];
            if (!e.is_object() || !e.contains("base") || !e["base"].is_string())
                fail("MalformedDocument",
                     "map[" + nm + "] must be {\"degeneracies\": [...], \"base\": name}");
            std::vector<int> degs;
            for (auto& gg : e.value("degeneracies", json::array())) {
                if (!gg.is_number_integer())
                    fail("MalformedDocument", "degeneracy indices must be integers");
                degs.push_back(gg.get<int>());
            }
            g.img[d].push_back(resolve_cell(l, d, degs, e["base"].get<std::string>(), by_name,
                                            "map[" + nm + "]"));
        }
    for (auto& [key, val] : m.items()) {
        (void)val;
        bool known = false;
        for (int d = 0; d <= k.dim_top() && !known; ++d) known = k.id_of(d, key) >= 0;
        if (!known) fail("MalformedDocument", "map given for unknown simplex '" + key + "'");
    }
    validate_smap(k, l, g);
    return g;
}

/* ------------------------------- simplicial groups ------------------------------- */

int SimplicialGroup::el(int n, const Simp& x) const {
    auto it = elem_idx[n].find(x);
    if (it == elem_idx[n].end())
        fail("MalformedDocument", s.name + ": unknown group element " + s.str(x) + " at level " +
                                      std::to_string(n));
    return it->second;
}

int SimplicialGroup::inv(int n, int i) const {
    for (int j = 0; j < static_cast<int>(elems[n].size()); ++j)
        if (op(n, i, j) == ident[n] && op(n, j, i) == ident[n]) return j;
    fail("MalformedDocument", s.name + ": element without inverse at level " + std::to_string(n));
}

Simp SimplicialGroup::face_el(int n, int i, int k) const { return s.face_of(elems[n][i], k); }

int SimplicialGroup::face_idx(int n, int i, int k) const { return el(n - 1, face_el(n, i, k)); }

int SimplicialGroup::degeneracy_idx(int n, int i, int k) const {
    return el(n + 1, SSet::degeneracy_of(elems[n][i], k));
}

void SimplicialGroup::validate() const {
    s.validate();
    for (int n = 0; n <= level_cap; ++n) {
        int m = static_cast<int>(elems[n].size());
        if (m == 0 || static_cast<int>(mult[n].size()) != m)
            fail("MalformedDocument", s.name + ": bad multiplication table at level " +
                                          std::to_string(n));
        for (int i = 0; i < m; ++i) {
            if (op(n, ident[n], i) != i || op(n, i, ident[n]) != i)
                fail("MalformedDocument", s.name + ": identity law fails at level " +
                                              std::to_string(n));
            inv(n, i);  // throws when no inverse exists
            for (int j = 0; j < m; ++j)
                for (int k = 0; k < m; ++k)
                    if (op(n, op(n, i, j), k) != op(n, i, op(n, j, k)))
                        fail("MalformedDocument", s.name + ": associativity fails at level " +
                                                      std::to_string(n));
        }
    }
    // faces and degeneracies are homomorphisms
    for (int n = 1; n <= level_cap; ++n)
        for (int i = 0; i < static_cast<int>(elems[n].size()); ++i)
            for (int j = 0; j < static_cast<int>(elems[n].size()); ++j)
                for (int k = 0; k <= n; ++k)
                    if (face_idx(n, op(n, i, j), k) !=
                        mult[n - 1][face_idx(n, i, k)][face_idx(n, j, k)])
                        fail("MalformedDocument", s.name + ": d_" + std::to_string(k) +
                                                      " is not a homomorphism at level " +
                                                      std::to_string(n));
    for (int n = 0; n < level_cap; ++n)
        for (int i = 0; i < static_cast<int>(elems[n].size()); ++i)
            for (int j = 0; j < static_cast<int>(elems[n].size()); ++j)
                for (int k = 0; k <= n; ++k)
                    if (degeneracy_idx(n, op(n, i, j), k) !=
                        mult[n + 1][degeneracy_idx(n, i, k)][degeneracy_idx(n, j, k)])
                        fail("MalformedDocument", s.name + ": s_" + std::to_string(k) +
                                                      " is not a homomorphism at level " +
                                                      std::to_string(n));
}

SimplicialGroup constant_group(const std::string& name, const std::vector<std::string>& elems,
                               const std::vector<std::vector<int>>& table, int ident_idx,
                               int level_cap) {
    SimplicialGroup g;
    g.s.name = name;
    g.s.dim_cap = level_cap + 1;
    g.s.names = {elems};
    g.s.face = {{}};
    g.level_cap = level_cap;
    g.elems.resize(level_cap + 2);
    g.elem_idx.resize(level_cap + 2);
    g.mult.resize(level_cap + 2);
    g.ident.resize(level_cap + 2);
    for (int n = 0; n <= level_cap + 1; ++n) {
        g.elems[n] = g.s.all_simplices(n);  // one fully degenerate copy per group element
        for (int i = 0; i < static_cast<int>(g.elems[n].size()); ++i)
            g.elem_idx[n][g.elems[n][i]] = i;
        g.mult[n] = table;  // all_simplices keeps the vertex order, so indices agree
        g.ident[n] = ident_idx;
    }
    g.validate();
    return g;
}

int tau_of(const SSet& k, const SimplicialGroup& g, const TwistingFunction& t, const Simp& x) {
    (void)k;
    if (x.dim() < 1) fail("MalformedDocument", "twisting function applied to a vertex");
    if (!x.degenerate()) return t.tau[x.base_dim][x.base_idx];
    const int j = x.degen.front();
    Simp inner = x;
    inner.degen.erase(inner.degen.begin());
    if (j == 0) return g.ident[x.dim() - 1];
    int ti = tau_of(k, g, t, inner);  // level x.dim()-2
    return g.el(x.dim() - 1, SSet::degeneracy_of(g.elems[x.dim() - 2][ti], j - 1));
}

void validate_twisting(const SSet& k, const SimplicialGroup& g, const TwistingFunction& t,
                       int dim_cap) {
    if (static_cast<int>(t.tau.size()) < std::min(dim_cap, k.dim_top()) + 1)
        fail("MalformedDocument", "twisting function is missing dimensions");
    int top = std::min(dim_cap, k.dim_top());
    if (top - 1 > g.level_cap)
        fail("MalformedDocument", "group levels do not reach the twisting range");
    for (int d = 1; d <= top; ++d)
        for (const Simp& x : k.all_simplices(d)) {
            int tx = tau_of(k, g, t, x);  // level d-1
            if (d >= 2) {
                int lhs = g.el(d - 2, g.s.face_of(g.elems[d - 1][tx], 0));
                int t0 = tau_of(k, g, t, k.face_of(x, 0));
                int t1 = tau_of(k, g, t, k.face_of(x, 1));
                int rhs = g.mult[d - 2][g.inv(d - 2, t0)][t1];
                if (lhs != rhs)
                    fail("TwistingAxiomViolation",
                         "d_0 tau != tau(d_0)^(-1) tau(d_1) on " + k.str(x));
                for (int i = 1; i <= d - 1; ++i)
                    if (g.el(d - 2, g.s.face_of(g.elems[d - 1][tx], i)) !=
                        tau_of(k, g, t, k.face_of(x, i + 1)))
                        fail("TwistingAxiomViolation", "d_" + std::to_string(i) +
                                                           " tau != tau(d_" +
                                                           std::to_string(i + 1) + ") on " +
                                                           k.str(x));
            }
            if (d + 1 <= top) {
                for (int i = 0; i <= d - 1; ++i)
                    if (g.el(d, SSet::degeneracy_of(g.elems[d - 1][tx], i)) !=
                        tau_of(k, g, t, SSet::degeneracy_of(x, i + 1)))
                        fail("TwistingAxiomViolation", "s_" + std::to_string(i) +
                                                           " tau != tau(s_" +
                                                           std::to_string(i + 1) + ") on " +
                                                           k.str(x));
                if (tau_of(k, g, t, SSet::degeneracy_of(x, 0)) != g.ident[d])
                    fail("TwistingAxiomViolation", "tau(s_0) != identity on " + k.str(x));
            }
        }
}

FiberAction left_translation(const SimplicialGroup& g) {
    return [&g](int level, int g_idx, const Simp& y) {
        return g.elems[level][g.mult[level][g_idx][g.el(level, y)]];
    };
}

SSet twisted_cartesian_product(const SSet& k, const SimplicialGroup& g, const TwistingFunction& t,
                               const SSet& f, const FiberAction& act, int dim_cap) {
    validate_twisting(k, g, t, std::min(dim_cap, k.dim_top()));
    ProductStructure ps = cartesian_product_full(k, f, dim_cap);
    SSet out = ps.prod;
    out.name = "(" + k.name + " xt " + f.name + ")";
    for (int n = 1; n <= out.dim_top(); ++n)
        for (int i = 0; i < static_cast<int>(ps.cells[n].size()); ++i) {
            const auto& [u, v] = ps.cells[n][i];
            Simp tv0 = act(n - 1, tau_of(k, g, t, u), f.face_of(v, 0));
            out.face[n][i][0] = ps.normalize_pair(k.face_of(u, 0), tv0);
        }
    out.validate();
    return out;
}

/* ------------------------------- normalized chains ------------------------------- */

CoalgebraPtr normalized_chains(const SSet& k, int trunc) {
    auto co = std::make_shared<ChainCoalgebra>();
    ComplexBuilder b("C(" + k.name + ")", trunc);
    for (int d = 0; d <= std::min(trunc, k.dim_top()); ++d)
        for (int i = 0; i < k.count(d); ++i) b.add(atom(k.names[d][i], d));

    auto cell_of = [&k](TermRef t) { return Simp{{}, t->degree, k.id_of(t->degree, t->name)}; };

    co->c = b.finish([&](TermRef t) {
        FormalSum s;
        Simp x = cell_of(t);
        for (int i = 0; i <= t->degree; ++i) {
            Simp f = k.face_of(x, i);
            if (f.degenerate()) continue;
            s.add(atom(k.names[f.base_dim][f.base_idx], f.base_dim), parity_sign(i));
        }
        return s;
    });
    co->cc = tensor_complex(co->c, co->c);

    // Alexander-Whitney: x |-> sum of front_l (x) back_{n-l}, degenerate halves dropped
    co->delta = make_chain_map(co->c, co->cc, 0, [&k, cell_of](TermRef t) {
        FormalSum s;
        int n = t->degree;
        Simp x = cell_of(t);
        for (int l = 0; l <= n; ++l) {
            Simp front = x;
            for (int tt = n; tt >= l + 1; --tt) front = k.face_of(front, tt);
            if (front.degenerate()) continue;
            Simp back = x;
            for (int c = 0; c < l; ++c) back = k.face_of(back, 0);
            if (back.degenerate()) continue;
            s.add(pair_term(atom(k.names[front.base_dim][front.base_idx], front.base_dim),
                            atom(k.names[back.base_dim][back.base_idx], back.base_dim)),
                  1);
        }
        return s;
    });
    co->unit = co->c->basis[0][0];
    return co;
}

ChainMap chains_of_smap(const SSet& k, const SSet& l, const SMap& g, CoalgebraPtr ck,
                        CoalgebraPtr cl) {
    return make_chain_map(ck->c, cl->c, 0, [&k, &l, &g](TermRef t) {
        FormalSum s;
        Simp y = g.img[t->degree][k.id_of(t->degree, t->name)];
        if (!y.degenerate()) s.add(atom(l.names[y.base_dim][y.base_idx], y.base_dim), 1);
        return s;
    });
}

}  // namespace cohoch
