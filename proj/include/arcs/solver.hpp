#pragma once

// Exact maximum-arc search.
//
// The engine is a branch-and-bound over cells in row-major order (y major,
// x minor): each node selects a FREE cell, marks every cell collinear with
// the new point and a previously selected one OUT, and prunes when
// |solution| + |FREE| cannot beat the best size found.
//
// Symmetry reductions:
//  * seeded_2p (n = 2p, p >= 5 prime): the search fixes (0,0),(1,0),(0,1) —
//    any arc of size > p+3 has an affine image containing that seed. Each
//    selected point a also excludes its half-period translates a+(p,0),
//    a+(0,p), a+(p,p), because an arc containing such a pair has size
//    <= p+3. After a fourth point (x,y) is exhausted, (y,x) is excluded:
//    the coordinate swap fixes the seed. If the seeded optimum is not above
//    p+3 the solver falls back to a generic run to settle tau exactly.
//  * generic, prime n: the affine group is transitive on noncollinear
//    triples, so the same seed (and the swap exclusion) applies.
//  * generic, composite n: every nonempty arc is translated to contain
//    (0,0); an invertible linear map then takes a point of minimal
//    gcd-content g to (g,0). For g = 1 a stabilizer shear-and-scale further
//    pins a third point to (x, h) with h | n the minimal y-content and
//    0 <= x < h. Each root excludes the cells a normalized arc can no
//    longer contain.
//
// Parallel runs split the root subtrees into jobs. Workers share one
// monotonically growing size bound but only prune strictly below it, so
// merging job results in lexicographic job order reproduces the serial
// result regardless of timing.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <thread>
#include <vector>

#include "arcs/arc_model.hpp"
#include "arcs/geometry.hpp"
#include "arcs/modular.hpp"

namespace arcs {

enum class SearchMode { generic, seeded_2p };
enum class CellStatus { free_cell, in_cell, out_cell };

struct SearchOptions {
    SearchMode mode = SearchMode::generic;
    int threads = 1;
    std::optional<std::uint64_t> node_budget;
    std::optional<int> initial_best;
    int split_depth = 1;
    bool debug_check_arcs = false;
    bool disable_free_bound = false;  // testing hook: pruning soundness
    bool disable_reductions = false;  // testing hook: plain enumeration
    std::vector<Point> forced;        // pre-selected points, no reductions
    std::function<void(std::uint64_t nodes, int best)> progress;
};

struct SearchResult {
    ArcSet best;
    bool proven_optimal = false;
    std::uint64_t nodes = 0;
    double wall_ms = 0.0;
    bool budget_exhausted = false;
    SearchMode mode_used = SearchMode::generic;
    bool fell_back_to_generic = false;
};

namespace detail_solver {

constexpr int kWordsMax = (kMaxModulus * kMaxModulus + 63) / 64;

struct EngState {
    std::uint64_t in_b[kWordsMax];
    std::uint64_t out_b[kWordsMax];
    int out_count;
};

inline void st_clear(EngState& s, int words) {
    std::fill_n(s.in_b, words, 0);
    std::fill_n(s.out_b, words, 0);
    s.out_count = 0;
}
inline void st_copy(EngState& dst, const EngState& src, int words) {
    std::copy_n(src.in_b, words, dst.in_b);
    std::copy_n(src.out_b, words, dst.out_b);
    dst.out_count = src.out_count;
}
inline bool bit(const std::uint64_t* w, int i) { return (w[i >> 6] >> (i & 63)) & 1; }
inline void set_bit(std::uint64_t* w, int i) { w[i >> 6] |= std::uint64_t{1} << (i & 63); }

/// Immutable per-search tables shared by all workers.
struct EngContext {
    int n = 0, cells = 0, words = 0;
    bool squarefree = false;
    bool m1_exclusions = false; // seeded_2p translate exclusions
    int half = 0;               // p when n == 2p
    std::vector<std::uint64_t> universe; // ones on [0, cells)
    std::vector<int> transpose;          // cell of (y,x)
    std::vector<std::array<int, 3>> m1;  // half-period translates per cell
    bool dense_pairs = false;
    std::vector<std::uint64_t> pair_masks; // dense: C(cells,2) rows of `words`
    std::shared_ptr<const LineTable> table; // built when needed

    int pair_index(int a, int b) const {
        if (a > b) std::swap(a, b);
        return b * (b - 1) / 2 + a;
    }

    void build_pair_mask(int a, int b, std::uint64_t* dst) const {
        std::fill_n(dst, words, 0);
        if (squarefree) {
            int ax = a % n, ay = a / n, bx = b % n, by = b / n;
            for (int c = 0; c < cells; ++c)
                if (mod_norm(det3_raw(ax, ay, bx, by, c % n, c / n), n) == 0) set_bit(dst, c);
        } else {
            for (int id : table->common_lines(a, b)) {
                const auto& m = table->line_mask(id);
                for (int w = 0; w < words; ++w) dst[w] |= m[w];
            }
        }
    }
};

inline std::shared_ptr<EngContext> build_context(const Modulus& m, bool m1_exclusions) {
    auto ctx = std::make_shared<EngContext>();
    ctx->n = m.value();
    ctx->cells = ctx->n * ctx->n;
    ctx->words = (ctx->cells + 63) / 64;
    ctx->squarefree = m.squarefree();
    ctx->m1_exclusions = m1_exclusions;
    ctx->universe.assign(ctx->words, ~std::uint64_t{0});
    if (ctx->cells % 64 != 0)
        ctx->universe[ctx->words - 1] = (std::uint64_t{1} << (ctx->cells % 64)) - 1;

    int n = ctx->n;
    ctx->transpose.resize(ctx->cells);
    for (int c = 0; c < ctx->cells; ++c) ctx->transpose[c] = (c % n) * n + (c / n);

    if (m1_exclusions) {
        int p = n / 2;
        ctx->half = p;
        ctx->m1.resize(ctx->cells);
        for (int c = 0; c < ctx->cells; ++c) {
            int x = c % n, y = c / n;
            ctx->m1[c] = {y * n + (x + p) % n, ((y + p) % n) * n + x,
                          ((y + p) % n) * n + (x + p) % n};
        }
    }

    if (!ctx->squarefree) ctx->table = std::make_shared<const LineTable>(m);

    ctx->dense_pairs = ctx->cells <= 576;
    if (ctx->dense_pairs) {
        std::size_t pairs = std::size_t(ctx->cells) * (ctx->cells - 1) / 2;
        ctx->pair_masks.assign(pairs * ctx->words, 0);
        for (int b = 1; b < ctx->cells; ++b)
            for (int a = 0; a < b; ++a)
                ctx->build_pair_mask(a, b, &ctx->pair_masks[std::size_t(ctx->pair_index(a, b)) * ctx->words]);
    } else if (ctx->squarefree) {
        // No cached masks above the dense cap; determinant scans on demand.
    } else if (!ctx->table) {
        ctx->table = std::make_shared<const LineTable>(m);
    }
    return ctx;
}

/// OUT everything collinear with {a, b} that is not already decided.
inline void apply_pair_block(const EngContext& ctx, EngState& s, int a, int b) {
    if (ctx.dense_pairs) {
        const std::uint64_t* row = &ctx.pair_masks[std::size_t(ctx.pair_index(a, b)) * ctx.words];
        for (int w = 0; w < ctx.words; ++w) {
            std::uint64_t add = row[w] & ~s.in_b[w] & ~s.out_b[w];
            if (add) {
                s.out_b[w] |= add;
                s.out_count += __builtin_popcountll(add);
            }
        }
        return;
    }
    std::uint64_t row[kWordsMax];
    ctx.build_pair_mask(a, b, row);
    for (int w = 0; w < ctx.words; ++w) {
        std::uint64_t add = row[w] & ~s.in_b[w] & ~s.out_b[w];
        if (add) {
            s.out_b[w] |= add;
            s.out_count += __builtin_popcountll(add);
        }
    }
}

inline void mark_out(const EngContext& ctx, EngState& s, int cell) {
    (void)ctx;
    if (!bit(s.in_b, cell) && !bit(s.out_b, cell)) {
        set_bit(s.out_b, cell);
        ++s.out_count;
    }
}

inline void select_cell(const EngContext& ctx, EngState& s, std::vector<int>& stack, int cell) {
    set_bit(s.in_b, cell);
    for (int prior : stack) apply_pair_block(ctx, s, prior, cell);
    if (ctx.m1_exclusions)
        for (int t : ctx.m1[cell]) mark_out(ctx, s, t);
    stack.push_back(cell);
}

inline int next_free(const EngContext& ctx, const EngState& s, int from) {
    if (from >= ctx.cells) return -1;
    int w = from >> 6;
    std::uint64_t word = (ctx.universe[w] & ~(s.in_b[w] | s.out_b[w])) >> (from & 63);
    if (word) return from + __builtin_ctzll(word);
    for (++w; w < ctx.words; ++w) {
        word = ctx.universe[w] & ~(s.in_b[w] | s.out_b[w]);
        if (word) return (w << 6) + __builtin_ctzll(word);
    }
    return -1;
}

struct Job {
    EngState state;
    std::vector<int> stack;
    int scan_from = 0;
    int transpose_level = -1; // stack depth at which the swap exclusion applies
};

struct JobResult {
    int best_size = 0;
    std::vector<int> best_stack;
    std::uint64_t nodes = 0;
};

struct SharedProgress {
    std::atomic<int> best_size{0};
    std::atomic<std::uint64_t> nodes{0};
    std::atomic<bool> stop{false};
    std::uint64_t budget = ~std::uint64_t{0};
};

class Engine {
public:
    Engine(std::shared_ptr<const EngContext> ctx, const SearchOptions& opts, SharedProgress& shared)
        : ctx_(std::move(ctx)), opts_(opts), shared_(shared) {}

    JobResult run(const Job& job) {
        res_ = JobResult{};
        stack_ = job.stack;
        // Arcs are reported only above the bound: the job's own prefix is
        // accounted for by the caller, and an injected lower bound means
        // equally sized arcs are already known elsewhere.
        bound_ = std::max(static_cast<int>(stack_.size()), opts_.initial_best.value_or(0));
        EngState s;
        st_copy(s, job.state, ctx_->words);
        descend(s, job.scan_from, job.transpose_level);
        return res_;
    }

private:
    void descend(EngState& s, int scan_from, int transpose_level) {
        const EngContext& ctx = *ctx_;
        int level = static_cast<int>(stack_.size());
        for (int c = next_free(ctx, s, scan_from); c != -1; c = next_free(ctx, s, c + 1)) {
            if (shared_.stop.load(std::memory_order_relaxed)) return;
            EngState child;
            st_copy(child, s, ctx.words);
            select_cell(ctx, child, stack_, c);
            note_node();
            int size = level + 1;
            if (size > bound_) {
                bound_ = size;
                res_.best_size = size;
                res_.best_stack = stack_;
                raise_shared(size);
            }
            if (opts_.debug_check_arcs) debug_check();
            int free_cells = ctx.cells - size - child.out_count;
            bool prune = !opts_.disable_free_bound &&
                         (size + free_cells <= bound_ ||
                          size + free_cells < shared_.best_size.load(std::memory_order_relaxed));
            if (!prune) descend(child, c + 1, transpose_level);
            stack_.pop_back();
            mark_out(ctx, s, c);
            if (level == transpose_level) mark_out(ctx, s, ctx.transpose[c]);
        }
    }

    void note_node() {
        ++res_.nodes;
        std::uint64_t total = shared_.nodes.fetch_add(1, std::memory_order_relaxed) + 1;
        if (total >= shared_.budget) shared_.stop.store(true, std::memory_order_relaxed);
        if (opts_.progress && (total & ((1u << 20) - 1)) == 0)
            opts_.progress(total, shared_.best_size.load(std::memory_order_relaxed));
    }

    void raise_shared(int size) {
        int cur = shared_.best_size.load(std::memory_order_relaxed);
        while (cur < size &&
               !shared_.best_size.compare_exchange_weak(cur, size, std::memory_order_relaxed)) {
        }
    }

    void debug_check() {
        int n = ctx_->n;
        for (size_t i = 0; i < stack_.size(); ++i)
            for (size_t j = i + 1; j < stack_.size(); ++j)
                for (size_t k = j + 1; k < stack_.size(); ++k)
                    if (collinear(Point::from_cell(stack_[i], n), Point::from_cell(stack_[j], n),
                                  Point::from_cell(stack_[k], n)))
                        throw error("search invariant violated: IN set is not an arc");
    }

    std::shared_ptr<const EngContext> ctx_;
    const SearchOptions& opts_;
    SharedProgress& shared_;
    std::vector<int> stack_;
    JobResult res_;
    int bound_ = 0;
};

inline int cell_content(int x, int y, int n) { return std::gcd(std::gcd(x, y), n); }

/// Root jobs covering every arc up to the mode's symmetry reduction.
inline std::vector<Job> make_roots(const std::shared_ptr<const EngContext>& ctx,
                                   const SearchOptions& opts, std::uint64_t& setup_nodes) {
    const EngContext& c = *ctx;
    int n = c.n;
    auto fresh = [&] {
        Job j;
        st_clear(j.state, c.words);
        return j;
    };
    auto sel = [&](Job& j, int x, int y) {
        select_cell(c, j.state, j.stack, Point(x, y, n).cell());
        ++setup_nodes;
    };

    if (!opts.forced.empty()) {
        Job j = fresh();
        for (const Point& p : opts.forced) {
            int cell = p.cell();
            if (bit(j.state.in_b, cell) || bit(j.state.out_b, cell))
                throw cell_not_free("forced point is not free");
            select_cell(c, j.state, j.stack, cell);
            ++setup_nodes;
        }
        return {j};
    }

    if (opts.mode == SearchMode::seeded_2p) {
        Job j = fresh();
        sel(j, 0, 0);
        sel(j, 1, 0);
        sel(j, 0, 1);
        j.transpose_level = 3;
        return {j};
    }

    if (opts.disable_reductions) return {fresh()};

    Modulus m(n);
    if (m.prime()) {
        // AGL(2,p) is transitive on noncollinear triples.
        Job j = fresh();
        sel(j, 0, 0);
        sel(j, 1, 0);
        sel(j, 0, 1);
        j.transpose_level = 3;
        return {j};
    }

    std::vector<Job> roots;
    for (int g : divisors(n)) {
        if (g == n) continue;
        if (g == 1) {
            for (int h : divisors(n)) {
                if (h == n) continue;
                for (int x = 0; x < h; ++x) {
                    Job j = fresh();
                    sel(j, 0, 0);
                    sel(j, 1, 0);
                    // A normalized arc has no point with y != 0 and
                    // gcd(y, n) below the pinned minimal y-content h.
                    for (int cell = 0; cell < c.cells; ++cell) {
                        int cy = cell / n;
                        if (cy != 0 && std::gcd(cy, n) < h) mark_out(c, j.state, cell);
                    }
                    int third = Point(x, h, n).cell();
                    if (bit(j.state.in_b, third) || bit(j.state.out_b, third)) continue;
                    select_cell(c, j.state, j.stack, third);
                    ++setup_nodes;
                    if (h == 1 && x == 0) j.transpose_level = 3;
                    roots.push_back(std::move(j));
                }
            }
        } else {
            Job j = fresh();
            sel(j, 0, 0);
            // Minimal content g: every cell of smaller content is excluded.
            for (int cell = 1; cell < c.cells; ++cell)
                if (cell_content(cell % n, cell / n, n) < g) mark_out(c, j.state, cell);
            int second = Point(g, 0, n).cell();
            if (bit(j.state.out_b, second)) continue;
            select_cell(c, j.state, j.stack, second);
            ++setup_nodes;
            roots.push_back(std::move(j));
        }
    }
    return roots;
}

/// Expands jobs `depth` extra levels, mirroring the serial candidate order.
inline std::vector<Job> expand_jobs(const std::shared_ptr<const EngContext>& ctx,
                                    std::vector<Job> jobs, int depth,
                                    std::uint64_t& setup_nodes,
                                    std::vector<std::pair<int, std::vector<int>>>& prefix_bests) {
    const EngContext& c = *ctx;
    for (int d = 0; d < depth; ++d) {
        std::vector<Job> next;
        for (Job& j : jobs) {
            EngState s;
            st_copy(s, j.state, c.words);
            int level = static_cast<int>(j.stack.size());
            for (int cell = next_free(c, s, j.scan_from); cell != -1;
                 cell = next_free(c, s, cell + 1)) {
                Job child;
                st_copy(child.state, s, c.words);
                child.stack = j.stack;
                select_cell(c, child.state, child.stack, cell);
                ++setup_nodes;
                prefix_bests.emplace_back(static_cast<int>(child.stack.size()), child.stack);
                child.scan_from = cell + 1;
                child.transpose_level = j.transpose_level;
                next.push_back(std::move(child));
                mark_out(c, s, cell);
                if (level == j.transpose_level) mark_out(c, s, c.transpose[cell]);
            }
        }
        jobs = std::move(next);
    }
    return jobs;
}

} // namespace detail_solver

/// Per-cell IN/OUT/FREE search state; the public face of one search node.
class SearchState {
public:
    SearchState(const Modulus& m, SearchMode mode = SearchMode::generic)
        : ctx_(detail_solver::build_context(m, mode == SearchMode::seeded_2p)) {
        if (mode == SearchMode::seeded_2p) {
            int n = m.value();
            int p = n / 2;
            if (n % 2 != 0 || !is_prime(p) || p < 5)
                throw invalid_mode("seeded_2p requires n = 2p with p >= 5 prime");
        }
        detail_solver::st_clear(state_, ctx_->words);
    }

    void select_point(const Point& p) {
        int cell = p.cell();
        if (status(p) != CellStatus::free_cell) throw cell_not_free("cell is not FREE");
        detail_solver::select_cell(*ctx_, state_, stack_, cell);
    }

    CellStatus status(const Point& p) const {
        int cell = p.cell();
        if (detail_solver::bit(state_.in_b, cell)) return CellStatus::in_cell;
        if (detail_solver::bit(state_.out_b, cell)) return CellStatus::out_cell;
        return CellStatus::free_cell;
    }

    int in_count() const { return static_cast<int>(stack_.size()); }
    int out_count() const { return state_.out_count; }
    int free_count() const { return ctx_->cells - in_count() - out_count(); }

    std::vector<Point> chosen() const {
        std::vector<Point> out;
        for (int c : stack_) out.push_back(Point::from_cell(c, ctx_->n));
        return out;
    }

private:
    std::shared_ptr<const detail_solver::EngContext> ctx_;
    detail_solver::EngState state_;
    std::vector<int> stack_;
};

inline SearchResult solve(const Modulus& m, const SearchOptions& opts = {});

namespace detail_solver {

inline SearchResult run_search(const Modulus& m, const SearchOptions& opts) {
    auto start = std::chrono::steady_clock::now();
    auto ctx = build_context(m, opts.mode == SearchMode::seeded_2p);

    SharedProgress shared;
    if (opts.node_budget) shared.budget = *opts.node_budget;
    if (opts.initial_best) shared.best_size.store(*opts.initial_best);

    std::uint64_t setup_nodes = 0;
    std::vector<Job> jobs = make_roots(ctx, opts, setup_nodes);
    std::vector<std::pair<int, std::vector<int>>> prefix_bests;
    for (const Job& j : jobs) prefix_bests.emplace_back(static_cast<int>(j.stack.size()), j.stack);
    int depth = std::max(0, opts.split_depth);
    if (opts.threads > 1 && depth > 0)
        jobs = expand_jobs(ctx, std::move(jobs), depth, setup_nodes, prefix_bests);
    shared.nodes.store(setup_nodes);

    std::vector<JobResult> results(jobs.size());
    int threads = std::max(1, opts.threads);
    if (threads == 1) {
        Engine eng(ctx, opts, shared);
        for (size_t i = 0; i < jobs.size(); ++i) {
            if (shared.stop.load()) break;
            results[i] = eng.run(jobs[i]);
        }
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                Engine eng(ctx, opts, shared);
                for (;;) {
                    size_t i = next.fetch_add(1);
                    if (i >= jobs.size()) return;
                    if (shared.stop.load()) return;
                    results[i] = eng.run(jobs[i]);
                }
            });
        for (auto& th : pool) th.join();
    }

    // Deterministic merge: prefix discoveries first, then job interiors, in
    // lexicographic job order; only strict improvements replace the best.
    int best_size = opts.initial_best.value_or(0);
    std::vector<int> best_stack;
    auto fold = [&](int size, const std::vector<int>& stack) {
        if (size > best_size && !stack.empty()) {
            best_size = size;
            best_stack = stack;
        }
    };
    for (auto& [size, stack] : prefix_bests) fold(size, stack);
    for (size_t i = 0; i < jobs.size(); ++i) fold(results[i].best_size, results[i].best_stack);

    std::vector<Point> pts;
    for (int c : best_stack) pts.push_back(Point::from_cell(c, m.value()));
    SearchResult out{ArcSet(m, std::move(pts)), false, 0, 0.0, false, opts.mode, false};
    out.nodes = shared.nodes.load();
    out.budget_exhausted = shared.stop.load();
    out.proven_optimal = !out.budget_exhausted;
    out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                      .count();
    if (!is_arc(out.best)) throw error("internal error: best result is not an arc");
    return out;
}

} // namespace detail_solver

inline SearchResult solve(const Modulus& m, const SearchOptions& opts) {
    int n = m.value();
    if (opts.mode == SearchMode::seeded_2p) {
        int p = n / 2;
        if (n % 2 != 0 || !is_prime(p) || p < 5)
            throw invalid_mode("seeded_2p requires n = 2p with p >= 5 prime");
    }
    SearchResult res = detail_solver::run_search(m, opts);
    if (opts.mode == SearchMode::seeded_2p && res.proven_optimal && res.best.size() <= n / 2 + 3) {
        // The seeded reduction only settles tau when the optimum exceeds
        // p+3; otherwise rerun without the seed.
        SearchOptions generic = opts;
        generic.mode = SearchMode::generic;
        SearchResult full = detail_solver::run_search(m, generic);
        full.nodes += res.nodes;
        full.wall_ms += res.wall_ms;
        full.fell_back_to_generic = true;
        full.mode_used = SearchMode::generic;
        return full;
    }
    return res;
}

/// Independent subtree jobs whose merged results reproduce the serial
/// search; exposed for the determinism tests.
inline std::vector<std::pair<std::vector<Point>, int>> split_work(const Modulus& m,
                                                                  const SearchOptions& opts,
                                                                  int depth) {
    auto ctx = detail_solver::build_context(m, opts.mode == SearchMode::seeded_2p);
    std::uint64_t setup = 0;
    std::vector<detail_solver::Job> jobs = detail_solver::make_roots(ctx, opts, setup);
    std::vector<std::pair<int, std::vector<int>>> prefix_bests;
    jobs = detail_solver::expand_jobs(ctx, std::move(jobs), depth, setup, prefix_bests);
    std::vector<std::pair<std::vector<Point>, int>> out;
    for (const auto& j : jobs) {
        std::vector<Point> pts;
        for (int c : j.stack) pts.push_back(Point::from_cell(c, m.value()));
        out.emplace_back(std::move(pts), j.scan_from);
    }
    return out;
}

} // namespace arcs
