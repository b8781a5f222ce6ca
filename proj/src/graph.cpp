#include "gasket/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace gasket {

namespace {

std::uint64_t coord_key(std::int64_t x, std::int64_t y) {
    return (static_cast<std::uint64_t>(x) << 32) | static_cast<std::uint64_t>(y);
}

std::int64_t pow3(int n) {
    std::int64_t v = 1;
    for (int i = 0; i < n; ++i) v *= 3;
    return v;
}

struct Point {
    std::int64_t x, y;
};

}  // namespace

int GasketGraph::interior_count() const {
    int n = 0;
    for (bool b : boundary)
        if (!b) ++n;
    return n;
}

double GasketGraph::a() const {
    return 0.5 * static_cast<double>(pow3(level + 1));
}

std::int64_t GasketGraph::dist2_scaled(int i, int j) const {
    const std::int64_t dx = x[i] - x[j];
    const std::int64_t dy = y[i] - y[j];
    return dx * dx + dx * dy + dy * dy;
}

double GasketGraph::distance(int i, int j) const {
    return std::ldexp(std::sqrt(static_cast<double>(dist2_scaled(i, j))), -level);
}

GasketGraph build_graph(int m, int cap) {
    if (m < 0) throw std::invalid_argument("build_graph: level must be nonnegative");
    if (m > cap) throw std::runtime_error("build_graph: level " + std::to_string(m) +
                                          " exceeds cap " + std::to_string(cap));

    const std::int64_t scale = std::int64_t{1} << m;
    const Point corner[3] = {{0, 0}, {scale, 0}, {0, scale}};

    struct Rec {
        Point p;
        std::string word;  // canonical (lexicographically minimal) address
    };
    std::vector<Rec> recs;
    std::unordered_map<std::uint64_t, int> by_coord;
    const std::int64_t n_cells = pow3(m);
    recs.reserve(static_cast<std::size_t>(3 * (pow3(m) + 1) / 2));
    by_coord.reserve(recs.capacity() * 2);

    std::vector<std::array<int, 3>> cell_recs(static_cast<std::size_t>(n_cells));

    std::string cell_word(static_cast<std::size_t>(m), '1');
    std::vector<int> digits(static_cast<std::size_t>(m), 0);
    for (std::int64_t c = 0; c < n_cells; ++c) {
        for (int j = 0; j < 3; ++j) {
            // f_{w0} o ... o f_{w(m-1)} (p_j) with f_i(z) = (z + p_i)/2
            Point z = corner[j];
            for (int k = m - 1; k >= 0; --k) {
                z.x = (z.x + corner[digits[static_cast<std::size_t>(k)]].x) / 2;
                z.y = (z.y + corner[digits[static_cast<std::size_t>(k)]].y) / 2;
            }
            std::string word = cell_word;
            word.push_back(static_cast<char>('1' + j));

            const std::uint64_t key = coord_key(z.x, z.y);
            auto [it, inserted] = by_coord.try_emplace(key, static_cast<int>(recs.size()));
            if (inserted) {
                recs.push_back({z, std::move(word)});
            } else if (word < recs[static_cast<std::size_t>(it->second)].word) {
                recs[static_cast<std::size_t>(it->second)].word = std::move(word);
            }
            cell_recs[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)] = it->second;
        }
        // advance the base-3 odometer
        for (int k = m - 1; k >= 0; --k) {
            auto& d = digits[static_cast<std::size_t>(k)];
            if (++d < 3) {
                cell_word[static_cast<std::size_t>(k)] = static_cast<char>('1' + d);
                break;
            }
            d = 0;
            cell_word[static_cast<std::size_t>(k)] = '1';
        }
    }

    // Canonical vertex order: lexicographic on the minimal address.
    std::vector<int> order(recs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return recs[static_cast<std::size_t>(a)].word <
                                         recs[static_cast<std::size_t>(b)].word; });
    std::vector<int> rec_to_vertex(recs.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        rec_to_vertex[static_cast<std::size_t>(order[i])] = static_cast<int>(i);

    GasketGraph g;
    g.level = m;
    const int n = static_cast<int>(recs.size());
    g.x.resize(static_cast<std::size_t>(n));
    g.y.resize(static_cast<std::size_t>(n));
    g.addr.resize(static_cast<std::size_t>(n));
    g.boundary.assign(static_cast<std::size_t>(n), false);
    for (int i = 0; i < n; ++i) {
        const Rec& r = recs[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
        g.x[static_cast<std::size_t>(i)] = r.p.x;
        g.y[static_cast<std::size_t>(i)] = r.p.y;
        g.addr[static_cast<std::size_t>(i)] = r.word;
        for (const Point& q : corner) {
            if (r.p.x == q.x && r.p.y == q.y) g.boundary[static_cast<std::size_t>(i)] = true;
        }
    }

    g.cells.reserve(cell_recs.size());
    g.edges.reserve(static_cast<std::size_t>(3 * n_cells));
    g.neighbors.assign(static_cast<std::size_t>(n), {});
    for (const auto& cr : cell_recs) {
        std::array<int, 3> cell{rec_to_vertex[static_cast<std::size_t>(cr[0])],
                                rec_to_vertex[static_cast<std::size_t>(cr[1])],
                                rec_to_vertex[static_cast<std::size_t>(cr[2])]};
        g.cells.push_back(cell);
        for (int a = 0; a < 3; ++a) {
            for (int b = a + 1; b < 3; ++b) {
                const int i = std::min(cell[static_cast<std::size_t>(a)], cell[static_cast<std::size_t>(b)]);
                const int j = std::max(cell[static_cast<std::size_t>(a)], cell[static_cast<std::size_t>(b)]);
                g.edges.emplace_back(i, j);
                g.neighbors[static_cast<std::size_t>(i)].push_back(j);
                g.neighbors[static_cast<std::size_t>(j)].push_back(i);
            }
        }
    }
    for (auto& nb : g.neighbors) std::sort(nb.begin(), nb.end());
    return g;
}

std::vector<int> nesting_map(const GasketGraph& coarse, const GasketGraph& fine) {
    if (fine.level < coarse.level)
        throw std::invalid_argument("nesting_map: fine level below coarse level");
    const int shift = fine.level - coarse.level;
    std::unordered_map<std::uint64_t, int> fine_index;
    fine_index.reserve(static_cast<std::size_t>(fine.vertex_count()) * 2);
    for (int i = 0; i < fine.vertex_count(); ++i)
        fine_index.emplace(coord_key(fine.x[static_cast<std::size_t>(i)],
                                     fine.y[static_cast<std::size_t>(i)]), i);

    std::vector<int> map(static_cast<std::size_t>(coarse.vertex_count()));
    for (int i = 0; i < coarse.vertex_count(); ++i) {
        const auto it = fine_index.find(coord_key(coarse.x[static_cast<std::size_t>(i)] << shift,
                                                  coarse.y[static_cast<std::size_t>(i)] << shift));
        if (it == fine_index.end())
            throw std::logic_error("nesting_map: coarse vertex missing from fine graph");
        map[static_cast<std::size_t>(i)] = it->second;
    }
    return map;
}

Eigen::VectorXd restrict_values(const Eigen::VectorXd& on_fine,
                                const GasketGraph& fine, const GasketGraph& coarse) {
    if (on_fine.size() != fine.vertex_count())
        throw std::invalid_argument("restrict_values: value array length does not match V_M");
    const std::vector<int> map = nesting_map(coarse, fine);
    Eigen::VectorXd out(coarse.vertex_count());
    for (int i = 0; i < coarse.vertex_count(); ++i)
        out[i] = on_fine[map[static_cast<std::size_t>(i)]];
    return out;
}

double discrete_integral(const GasketGraph& g, const Eigen::VectorXd& values) {
    if (values.size() != g.vertex_count())
        throw std::invalid_argument("discrete_integral: value array length does not match V_m");
    return values.sum() / g.a();
}

VoronoiCells voronoi_quadrature(const GasketGraph& gm, const GasketGraph& gM) {
    if (gM.level < gm.level)
        throw std::invalid_argument("voronoi_quadrature: reference level below cell level");
    const int shift = gM.level - gm.level;
    const int nm = gm.vertex_count();
    const int nM = gM.vertex_count();

    VoronoiCells cells;
    cells.level_m = gm.level;
    cells.level_M = gM.level;
    cells.assignment.resize(static_cast<std::size_t>(nM));
    cells.members.assign(static_cast<std::size_t>(nm), {});

    std::vector<std::int64_t> cx(static_cast<std::size_t>(nm)), cy(static_cast<std::size_t>(nm));
    for (int i = 0; i < nm; ++i) {
        cx[static_cast<std::size_t>(i)] = gm.x[static_cast<std::size_t>(i)] << shift;
        cy[static_cast<std::size_t>(i)] = gm.y[static_cast<std::size_t>(i)] << shift;
    }

    for (int j = 0; j < nM; ++j) {
        const std::int64_t px = gM.x[static_cast<std::size_t>(j)];
        const std::int64_t py = gM.y[static_cast<std::size_t>(j)];
        int best = -1;
        std::int64_t best_d2 = -1;
        for (int i = 0; i < nm; ++i) {
            const std::int64_t dx = px - cx[static_cast<std::size_t>(i)];
            const std::int64_t dy = py - cy[static_cast<std::size_t>(i)];
            const std::int64_t d2 = dx * dx + dx * dy + dy * dy;
            if (best < 0 || d2 < best_d2) {  // ties keep the smaller index
                best = i;
                best_d2 = d2;
            }
        }
        cells.assignment[static_cast<std::size_t>(j)] = best;
        cells.members[static_cast<std::size_t>(best)].push_back(j);
    }

    cells.measure.resize(static_cast<std::size_t>(nm));
    const double aM = gM.a();
    for (int i = 0; i < nm; ++i)
        cells.measure[static_cast<std::size_t>(i)] =
            static_cast<double>(cells.members[static_cast<std::size_t>(i)].size()) / aM;
    return cells;
}

Eigen::VectorXd harmonic_extension(const GasketGraph& gm, const Eigen::VectorXd& values,
                                   const GasketGraph& gm1) {
    if (gm1.level != gm.level + 1)
        throw std::invalid_argument("harmonic_extension: target must be one level deeper");
    if (values.size() != gm.vertex_count())
        throw std::invalid_argument("harmonic_extension: value array length does not match V_m");

    std::unordered_map<std::uint64_t, int> fine_index;
    fine_index.reserve(static_cast<std::size_t>(gm1.vertex_count()) * 2);
    for (int i = 0; i < gm1.vertex_count(); ++i)
        fine_index.emplace(coord_key(gm1.x[static_cast<std::size_t>(i)],
                                     gm1.y[static_cast<std::size_t>(i)]), i);

    Eigen::VectorXd out = Eigen::VectorXd::Zero(gm1.vertex_count());
    const std::vector<int> nest = nesting_map(gm, gm1);
    for (int i = 0; i < gm.vertex_count(); ++i)
        out[nest[static_cast<std::size_t>(i)]] = values[i];

    for (const auto& cell : gm.cells) {
        for (int opp = 0; opp < 3; ++opp) {
            const int a = cell[static_cast<std::size_t>((opp + 1) % 3)];
            const int b = cell[static_cast<std::size_t>((opp + 2) % 3)];
            const int c = cell[static_cast<std::size_t>(opp)];
            // midpoint of (a,b): coarse numerators sum to the fine-scale numerator
            const std::uint64_t key = coord_key(gm.x[static_cast<std::size_t>(a)] + gm.x[static_cast<std::size_t>(b)],
                                                gm.y[static_cast<std::size_t>(a)] + gm.y[static_cast<std::size_t>(b)]);
            const auto it = fine_index.find(key);
            if (it == fine_index.end())
                throw std::logic_error("harmonic_extension: midpoint missing from fine graph");
            out[it->second] = (2.0 * values[a] + 2.0 * values[b] + values[c]) / 5.0;
        }
    }
    return out;
}

}  // namespace gasket
