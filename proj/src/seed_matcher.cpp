#include "deanon/seed_matcher.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "deanon/error.hpp"
#include "deanon/io.hpp"
#include "deanon/parallel.hpp"

namespace deanon {

namespace {

void check_same_size(SeedWeightMatrix const& a, SeedWeightMatrix const& b) {
    if (a.k() != b.k())
        throw InvalidArgument("weight matrices differ in size: " + std::to_string(a.k()) + " vs " +
                              std::to_string(b.k()));
    if (a.weights.size() != a.k() * a.k() || b.weights.size() != b.k() * b.k())
        throw InvalidArgument("weight matrix storage does not match its node list");
}

void check_permutation(Permutation const& perm, std::size_t k) {
    if (perm.size() != k) throw InvalidArgument("permutation has wrong length");
    std::vector<char> hit(k, 0);
    for (std::size_t p : perm) {
        if (p >= k || hit[p]) throw InvalidArgument("not a permutation");
        hit[p] = 1;
    }
}

std::size_t intersection_size(std::span<NodeId const> x, std::span<NodeId const> y) {
    std::size_t n = 0;
    auto i = x.begin(), j = y.begin();
    while (i != x.end() && j != y.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++n;
            ++i;
            ++j;
        }
    }
    return n;
}

struct ChainResult {
    Permutation perm;
    double cost = std::numeric_limits<double>::infinity();
};

ChainResult run_chain(SeedWeightMatrix const& a, SeedWeightMatrix const& b, AnnealConfig const& cfg,
                      std::size_t chain, std::atomic<std::size_t> const& first_exact) {
    std::size_t const k = a.k();
    Rng rng = cfg.seed.derive(chain).make_rng();
    // One draw selects an ordered pair x != y.
    std::uniform_int_distribution<std::size_t> pick_pair(0, k * (k - 1) - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Permutation perm(k);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    double cost = matching_cost(a, b, perm);

    ChainResult best{perm, cost};
    for (double temp = cfg.initial_temp; temp >= cfg.min_temp && best.cost > 0.0;
         temp *= cfg.cooling) {
        // A lower-index chain already reached cost 0; this one cannot win.
        if (first_exact.load(std::memory_order_relaxed) < chain) break;
        std::size_t accepted = 0;
        for (std::size_t step = 0; step < cfg.steps_per_temp; ++step) {
            std::size_t const draw = pick_pair(rng);
            std::size_t const x = draw / (k - 1);
            std::size_t y = draw % (k - 1);
            if (y >= x) ++y;
            double const delta = transposition_delta(a, b, perm, x, y);
            if (delta > 0.0) {
                double const ratio = delta / temp;
                if (ratio > 40.0 || unit(rng) >= std::exp(-ratio)) continue;
            }
            ++accepted;
            std::swap(perm[x], perm[y]);
            cost += delta;
            if (cost < best.cost - 1e-12) {
                best.perm = perm;
                best.cost = cost;
                if (cost <= 1e-9) {
                    best.cost = matching_cost(a, b, perm);
                    cost = best.cost;
                    if (best.cost == 0.0) break;
                }
            }
        }
        if (cfg.stop_when_frozen && accepted == 0) break;
    }
    // Incremental sums drift; report the exact cost of the returned state.
    best.cost = matching_cost(a, b, best.perm);
    return best;
}

}  // namespace

SeedWeightMatrix build_seed_weights(DirectedGraph const& g, std::size_t k, SeedWeightMode mode) {
    SeedWeightMatrix w;
    w.nodes = top_k_in_degree(g, k);
    w.weights.assign(k * k, 0.0);
    std::vector<std::span<NodeId const>> in(k);
    for (std::size_t i = 0; i < k; ++i) in[i] = g.in_neighbors(w.nodes[i]);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            if (i == j) continue;
            if (mode == SeedWeightMode::edge) {
                w(i, j) = g.has_edge(w.nodes[i], w.nodes[j]) ? 1.0 : 0.0;
            } else if (j > i && !in[i].empty() && !in[j].empty()) {
                double const shared = static_cast<double>(intersection_size(in[i], in[j]));
                double const norm = std::sqrt(static_cast<double>(in[i].size()) *
                                              static_cast<double>(in[j].size()));
                w(i, j) = w(j, i) = shared / norm;
            }
        }
    }
    return w;
}

double matching_cost(SeedWeightMatrix const& a, SeedWeightMatrix const& b, Permutation const& perm) {
    check_same_size(a, b);
    check_permutation(perm, a.k());
    std::size_t const k = a.k();
    double cost = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if (i != j) cost += std::abs(a(i, j) - b(perm[i], perm[j]));
    return cost;
}

double transposition_delta(SeedWeightMatrix const& a, SeedWeightMatrix const& b,
                           Permutation const& perm, std::size_t x, std::size_t y) {
    std::size_t const k = a.k();
    double const* A = a.weights.data();
    double const* B = b.weights.data();
    std::size_t const px = perm[x], py = perm[y];
    double before = 0.0, after = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        if (j == x || j == y) continue;
        std::size_t const pj = perm[j];
        double const axj = A[x * k + j], ayj = A[y * k + j];
        double const ajx = A[j * k + x], ajy = A[j * k + y];
        double const bxj = B[px * k + pj], byj = B[py * k + pj];
        double const bjx = B[pj * k + px], bjy = B[pj * k + py];
        before += std::abs(axj - bxj) + std::abs(ayj - byj) + std::abs(ajx - bjx) + std::abs(ajy - bjy);
        after += std::abs(axj - byj) + std::abs(ayj - bxj) + std::abs(ajx - bjy) + std::abs(ajy - bjx);
    }
    double const axy = A[x * k + y], ayx = A[y * k + x];
    double const bxy = B[px * k + py], byx = B[py * k + px];
    before += std::abs(axy - bxy) + std::abs(ayx - byx);
    after += std::abs(axy - byx) + std::abs(ayx - bxy);
    return after - before;
}

AnnealConfig resolve_anneal_config(SeedWeightMatrix const& a, SeedWeightMatrix const& b,
                                   AnnealConfig config) {
    check_same_size(a, b);
    std::size_t const k = a.k();
    if (k < 2) throw InvalidArgument("anneal: need k >= 2 hubs, got " + std::to_string(k));
    if (config.initial_temp <= 0.0) {
        double diff = 0.0, magnitude = 0.0;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) {
                if (i == j) continue;
                diff += std::abs(a(i, j) - b(i, j));
                magnitude += 0.5 * (std::abs(a(i, j)) + std::abs(b(i, j)));
            }
        double const pairs = static_cast<double>(k * (k - 1));
        // Identical matrices give zero mean disagreement; fall back to scale.
        config.initial_temp = diff > 0.0 ? diff / pairs : magnitude > 0.0 ? magnitude / pairs : 1.0;
    }
    if (config.steps_per_temp == 0) config.steps_per_temp = 100 * k;
    if (config.min_temp <= 0.0) config.min_temp = 1e-4 * config.initial_temp;
    if (!(config.cooling > 0.0 && config.cooling < 1.0))
        throw InvalidArgument("anneal: cooling must be in (0,1)");
    if (!std::isfinite(config.initial_temp) || !std::isfinite(config.min_temp))
        throw InvalidArgument("anneal: temperatures must be finite");
    if (config.restarts < 1) throw InvalidArgument("anneal: restarts must be >= 1");
    return config;
}

MatchingState anneal(SeedWeightMatrix const& a, SeedWeightMatrix const& b, AnnealConfig const& config) {
    AnnealConfig const cfg = resolve_anneal_config(a, b, config);
    std::vector<ChainResult> chains(cfg.restarts);
    std::atomic<std::size_t> first_exact{std::numeric_limits<std::size_t>::max()};
    parallel_for(cfg.restarts, cfg.threads, [&](std::size_t c) {
        chains[c] = run_chain(a, b, cfg, c, first_exact);
        if (chains[c].cost == 0.0) {
            std::size_t cur = first_exact.load();
            while (c < cur && !first_exact.compare_exchange_weak(cur, c)) {
            }
        }
    });
    std::size_t best = 0;
    for (std::size_t c = 1; c < chains.size(); ++c)
        if (chains[c].cost < chains[best].cost) best = c;
    return {chains[best].perm, chains[best].cost};
}

MatchingState brute_force_match(SeedWeightMatrix const& a, SeedWeightMatrix const& b) {
    check_same_size(a, b);
    std::size_t const k = a.k();
    if (k < 2) throw InvalidArgument("brute_force_match: need k >= 2, got " + std::to_string(k));
    if (k > 10) throw InvalidArgument("brute_force_match: k=" + std::to_string(k) + " exceeds 10");
    Permutation perm(k);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    MatchingState best{perm, matching_cost(a, b, perm)};
    while (std::next_permutation(perm.begin(), perm.end())) {
        double const c = matching_cost(a, b, perm);
        if (c < best.cost) best = {perm, c};
    }
    return best;
}

NodeMapping seeds_to_mapping(SeedWeightMatrix const& a, SeedWeightMatrix const& b,
                             MatchingState const& state) {
    check_same_size(a, b);
    check_permutation(state.perm, a.k());
    NodeMapping m;
    for (std::size_t i = 0; i < a.k(); ++i) m.insert(a.nodes[i], b.nodes[state.perm[i]]);
    return m;
}

void save_matching_instance(SeedWeightMatrix const& a, SeedWeightMatrix const& b,
                            std::filesystem::path const& path) {
    check_same_size(a, b);
    std::string text = "k," + std::to_string(a.k()) + "\n";
    auto nodes_line = [&](char const* tag, SeedWeightMatrix const& w) {
        text += tag;
        for (NodeId u : w.nodes) text += "," + std::to_string(u);
        text += '\n';
    };
    auto rows = [&](char const* tag, SeedWeightMatrix const& w) {
        for (std::size_t i = 0; i < w.k(); ++i) {
            text += tag;
            for (std::size_t j = 0; j < w.k(); ++j) text += "," + io::format_double(w(i, j));
            text += '\n';
        }
    };
    nodes_line("a_nodes", a);
    nodes_line("b_nodes", b);
    rows("a", a);
    rows("b", b);
    io::write_text(path, text);
}

}  // namespace deanon
