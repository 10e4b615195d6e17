#include "mdsconv/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstring>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "mdsconv/cdp.hpp"
#include "mdsconv/construct.hpp"
#include "mdsconv/minors.hpp"

namespace mdsconv {

std::vector<WalkPos> search_walk(int k, int target_degree)
{
    std::vector<WalkPos> w;
    if (k >= 2)
        for (int j = k - 1; j >= 1; --j) w.push_back({1, j});
    for (int i = 2; i <= target_degree; ++i)
        for (int j = k; j >= 1; --j) w.push_back({i, j});
    return w;
}

namespace {

// A minor anchored at a walk position, with every cell resolved to a value
// slot: slot 0 holds the constant 0, slot 1 the constant 1, and slot
// 2 + deg*k + (pos-1) the coefficient r(deg, pos). The anchor cell sits at
// buffer index (p-1)*p; every other cell is either fixed or assigned at an
// earlier walk depth, so det = c1*x + c0 in the anchor value x.
struct PackedMinor {
    int p = 0;
    std::vector<std::int32_t> cells;
};

// Incremental bookkeeping: expanding an anchored minor along its first
// column writes det = sum of cell*cofactor terms plus anchor*cofactor, and
// every cofactor is (a product of) smaller linked minors anchored at
// strictly earlier cells. Caching each minor's determinant value along the
// current search path therefore turns the (c0, c1) computation into a few
// table lookups per minor.
struct C0Term {
    std::int32_t slot = 0;                 // value of the expansion cell
    std::vector<std::int32_t> factors;     // registry ids of the cofactor pieces
};

struct RegMinor {
    int p = 0;
    std::int32_t anchor_slot = 0;
    std::vector<std::int32_t> c1_factors;  // empty product = 1 (covers p = 1)
    std::vector<C0Term> c0_terms;          // empty sum = 0
};

struct Plan {
    FieldPtr field;
    int n = 0, k = 0, D = 0, target = 0;
    int q1 = 0;
    std::vector<WalkPos> walk;
    bool incremental = true;
    // direct path (manual test driver): full anchored groups
    std::vector<std::vector<PackedMinor>> groups;
    // incremental path: linked minors only
    std::vector<RegMinor> registry;
    std::vector<std::vector<std::int32_t>> reg_groups;  // registry ids per walk depth
    std::vector<std::int32_t> fixed_ids;                // minors anchored at pinned cells
    std::vector<char> coset_min;  // indexed by log
    int slots = 0;

    int slot_of(int deg, int pos) const { return 2 + deg * k + (pos - 1); }

    int depth_of(int deg, int pos) const
    {
        if (k == 1) return deg - 2;
        if (deg == 1) return (k - 1) - pos;
        return (k - 1) + (deg - 2) * k + (k - pos);
    }
};

// slot of the reduced-matrix cell (row, col), 1-based; 0 for structural zeros
std::int32_t cell_slot(const Plan& pl, int row, int col)
{
    int t = (col - 1) / pl.k;
    int pos = (col - 1) % pl.k + 1;
    int dg = (row - 1) - t;
    return dg < 0 ? 0 : pl.slot_of(dg, pos);
}

// Split an arbitrary proper index set into its linked components (translated
// so each component's bottom row is D+1) and resolve them in the registry.
std::vector<std::int32_t> factor_ids(const Plan& pl,
                                     const std::map<std::vector<int>, std::int32_t>& index,
                                     const std::vector<int>& rows, const std::vector<int>& cols)
{
    std::vector<std::int32_t> out;
    int p = static_cast<int>(rows.size());
    int start = 0;
    for (int l = 1; l <= p; ++l) {
        bool split = (l == p) || ((cols[l] - 1) / pl.k >= rows[l - 1]);
        if (!split) continue;
        int shift = (pl.D + 1) - rows[l - 1];
        std::vector<int> key;
        key.reserve(2 * (l - start) + 1);
        for (int i = start; i < l; ++i) key.push_back(rows[i] + shift);
        key.push_back(-1);
        for (int i = start; i < l; ++i) key.push_back(cols[i] + shift * pl.k);
        auto it = index.find(key);
        if (it == index.end()) throw Error("internal error: unregistered minor component");
        out.push_back(it->second);
        start = l;
    }
    return out;
}

// linked_only drops the splitting minors, which carry no fresh constraint on
// a prefix whose earlier depths all passed, and builds the incremental
// registry; the manual test driver keeps the full groups evaluated directly
// so planted (invalid) prefixes still show their dead branches.
Plan build_plan(FieldPtr field, int n, int target, bool linked_only = true,
                std::uint64_t cap = 100'000'000)
{
    if (n < 2) throw Error("block length must be at least 2");
    if (target < 3) throw DistanceTooSmall("target distance must be at least 3");
    Plan pl;
    pl.field = std::move(field);
    pl.n = n;
    pl.k = n - 1;
    pl.D = target - 2;
    pl.target = target;
    pl.q1 = static_cast<int>(pl.field->order());
    pl.walk = search_walk(pl.k, pl.D);
    if (count_anchored(pl.k, pl.D + 1) > cap)
        throw SizeOverflow("anchored minor count exceeds the cap");
    pl.slots = 2 + (pl.D + 1) * pl.k;
    pl.incremental = linked_only;

    if (!linked_only) {
        pl.groups.resize(pl.walk.size());
        for (std::size_t d = 0; d < pl.walk.size(); ++d) {
            int deg = pl.walk[d].deg, pos = pl.walk[d].pos;
            int anchor_col = (pl.D - deg) * pl.k + pos;
            for_each_anchored_at(
                pl.k, pl.D + 1, anchor_col,
                [&](const std::vector<int>& rows, const std::vector<int>& cols) {
                    int p = static_cast<int>(rows.size());
                    if (p == 1) return;  // would only forbid 0, never a candidate
                    PackedMinor pm;
                    pm.p = p;
                    pm.cells.resize(static_cast<std::size_t>(p) * p);
                    for (int r = 0; r < p; ++r)
                        for (int c = 0; c < p; ++c)
                            pm.cells[static_cast<std::size_t>(r) * p + c] =
                                cell_slot(pl, rows[r], cols[c]);
                    pl.groups[d].push_back(std::move(pm));
                });
        }
    } else {
        // registry of every linked bottom-anchored minor, walked anchors
        // right to left so references always point at already-built entries
        std::map<std::vector<int>, std::int32_t> index;
        struct Raw {
            std::vector<int> rows, cols;
        };
        std::vector<Raw> raw;
        pl.reg_groups.resize(pl.walk.size());
        for (int c = pl.k * (pl.D + 1); c >= 1; --c) {
            int block = (c - 1) / pl.k;
            int deg = pl.D - block;
            int pos = (c - 1) % pl.k + 1;
            int depth = -1;
            if (deg >= 1 && !(deg == 1 && pos == pl.k))
                depth = pl.depth_of(deg, pos);  // -1: anchored at a pinned cell
            for_each_anchored_linked(
                pl.k, pl.D + 1, c,
                [&](const std::vector<int>& rows, const std::vector<int>& cols) {
                    std::int32_t id = static_cast<std::int32_t>(pl.registry.size());
                    RegMinor rm;
                    rm.p = static_cast<int>(rows.size());
                    rm.anchor_slot = cell_slot(pl, pl.D + 1, c);
                    pl.registry.push_back(std::move(rm));
                    raw.push_back({rows, cols});
                    std::vector<int> key;
                    key.reserve(2 * rows.size() + 1);
                    for (int r : rows) key.push_back(r);
                    key.push_back(-1);
                    for (int cc : cols) key.push_back(cc);
                    index.emplace(std::move(key), id);
                    if (depth >= 0)
                        pl.reg_groups[depth].push_back(id);
                    else
                        pl.fixed_ids.push_back(id);
                });
        }
        // resolve the expansion references (all point at larger anchor
        // columns, already present in the index)
        for (std::size_t id = 0; id < pl.registry.size(); ++id) {
            RegMinor& rm = pl.registry[id];
            const std::vector<int>& rows = raw[id].rows;
            const std::vector<int>& cols = raw[id].cols;
            int p = rm.p;
            if (p == 1) continue;  // det = x: empty product, empty sum
            std::vector<int> sub_rows(rows.begin(), rows.end() - 1);
            std::vector<int> sub_cols(cols.begin() + 1, cols.end());
            rm.c1_factors = factor_ids(pl, index, sub_rows, sub_cols);
            for (int r = 0; r < p - 1; ++r) {
                std::int32_t slot = cell_slot(pl, rows[r], cols[0]);
                if (slot == 0) continue;  // structurally zero term
                std::vector<int> trows;
                for (int i = 0; i < p; ++i)
                    if (i != r) trows.push_back(rows[i]);
                C0Term term;
                term.slot = slot;
                term.factors = factor_ids(pl, index, trows, sub_cols);
                rm.c0_terms.push_back(std::move(term));
            }
        }
    }

    pl.coset_min.assign(pl.q1, 0);
    for (int l = 0; l < pl.q1; ++l) {
        int cur = l, mn = l;
        do {
            cur = static_cast<int>((2LL * cur) % pl.q1);
            mn = std::min(mn, cur);
        } while (cur != l);
        if (mn == l) pl.coset_min[l] = 1;
    }
    return pl;
}

constexpr int kMaxP = 24;

struct Worker {
    const Plan* pl = nullptr;
    const Field* f = nullptr;
    const SearchOptions* opt = nullptr;

    std::vector<Fe> V;
    std::vector<Fe> assign;
    std::vector<std::vector<Fe>> cand;
    std::vector<std::size_t> cur;
    int d = 0;
    bool entered = false;  // whether cand[0] has been computed

    std::mt19937_64 rng;
    int worker_id = 0, worker_count = 1;

    std::vector<DepthStats> stats;
    std::uint64_t nodes = 0, completions = 0;
    int deepest = -1;
    std::vector<Fe> deepest_vals;
    std::vector<Fe> first_full;
    bool exhausted = false, budget_hit = false, stopped = false;

    std::atomic<std::uint64_t>* global_nodes = nullptr;
    std::uint64_t node_budget = 0;
    std::chrono::steady_clock::time_point deadline{};
    bool use_deadline = false;

    std::vector<std::uint32_t> stamp;
    std::uint32_t gen = 0;
    std::uint64_t next_ckpt = 0;
    Fe buf[kMaxP * kMaxP];
    std::vector<Fe> detval, c0cache, c1cache;  // per registry id (incremental path)

    void init()
    {
        int depths = static_cast<int>(pl->walk.size());
        V.assign(pl->slots, 0);
        V[1] = 1;
        for (int j = 1; j <= pl->k; ++j) V[pl->slot_of(0, j)] = 1;
        if (pl->D >= 1) V[pl->slot_of(1, pl->k)] = 1;  // r(1,1) when k = 1
        assign.assign(depths, 0);
        cand.assign(depths, {});
        cur.assign(depths, 0);
        stats.assign(depths, {});
        stamp.assign(pl->field->size(), 0);
        rng.seed(opt->seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(worker_id));
        if (pl->incremental) {
            detval.assign(pl->registry.size(), 0);
            c0cache.assign(pl->registry.size(), 0);
            c1cache.assign(pl->registry.size(), 0);
            // minors anchored at the pinned cells never change (they are 1x1
            // cells of the pinned all-ones prefix)
            for (std::int32_t id : pl->fixed_ids)
                detval[id] = V[pl->registry[id].anchor_slot];
        }
    }

    void eval_pair(const PackedMinor& pm, Fe& c0, Fe& c1)
    {
        const std::int32_t* c = pm.cells.data();
        if (pm.p == 2) {
            c0 = f->mul(V[c[0]], V[c[3]]);
            c1 = V[c[1]];
            return;
        }
        if (pm.p == 3) {
            Fe a00 = V[c[0]], a01 = V[c[1]], a02 = V[c[2]];
            Fe a10 = V[c[3]], a11 = V[c[4]], a12 = V[c[5]];
            Fe a21 = V[c[7]], a22 = V[c[8]];
            c1 = f->mul(a01, a12) ^ f->mul(a02, a11);
            c0 = f->mul(a00, static_cast<Fe>(f->mul(a11, a22) ^ f->mul(a12, a21)));
            c0 ^= f->mul(a01, f->mul(a10, a22));
            c0 ^= f->mul(a02, f->mul(a10, a21));
            return;
        }
        int p = pm.p;
        int anchor = (p - 1) * p;
        int cells = p * p;
        for (int i = 0; i < cells; ++i) buf[i] = V[c[i]];
        buf[anchor] = 0;
        c0 = det_inplace(buf, p, *f);
        // c1 is the anchor's cofactor (top-right (p-1)x(p-1) block; no sign
        // bookkeeping in characteristic 2)
        for (int r = 0; r + 1 < p; ++r)
            for (int cc = 1; cc < p; ++cc) buf[r * (p - 1) + (cc - 1)] = V[c[r * p + cc]];
        c1 = det_inplace(buf, p - 1, *f);
    }

    // legal values at depth dd from the current prefix; empty on a dead
    // branch. Returns the post-filter size (before probe subsampling).
    std::uint64_t compute_legal(int dd, std::vector<Fe>& out)
    {
        out.clear();
        ++gen;
        int forbidden = 0;
        bool dead = false;
        if (pl->incremental) {
            for (std::int32_t id : pl->reg_groups[dd]) {
                const RegMinor& rm = pl->registry[id];
                Fe c1 = 1;
                for (std::int32_t fid : rm.c1_factors) {
                    c1 = f->mul(c1, detval[fid]);
                    if (c1 == 0) break;
                }
                Fe c0 = 0;
                for (const C0Term& term : rm.c0_terms) {
                    Fe v = V[term.slot];
                    for (std::int32_t fid : term.factors) {
                        if (v == 0) break;
                        v = f->mul(v, detval[fid]);
                    }
                    c0 ^= v;
                }
                c0cache[id] = c0;
                c1cache[id] = c1;
                if (c1 == 0) {
                    if (c0 == 0 && rm.p > 1) dead = true;
                    continue;
                }
                Fe root = f->div(c0, c1);
                if (root != 0 && stamp[root] != gen) {
                    stamp[root] = gen;
                    if (++forbidden == pl->q1) dead = true;
                }
            }
            if (dead) return 0;
        } else {
            for (const PackedMinor& pm : pl->groups[dd]) {
                Fe c0, c1;
                eval_pair(pm, c0, c1);
                if (c1 == 0) {
                    if (c0 == 0) return 0;  // singular whatever the value: dead branch
                    continue;
                }
                Fe root = f->div(c0, c1);
                if (root != 0 && stamp[root] != gen) {
                    stamp[root] = gen;
                    if (++forbidden == pl->q1) return 0;  // nothing survives
                }
            }
        }

        const WalkPos w = pl->walk[dd];
        bool cyclo = false;
        Fe upper = 0;
        bool chain = false;
        if (opt->symmetry_filters && w.deg == 1 && pl->k >= 2) {
            if (w.pos == pl->k - 1) {
                cyclo = true;
            } else if (w.pos <= pl->k - 3) {
                chain = true;
                upper = assign[pl->depth_of(1, w.pos + 1)];
            }
        }

        auto exps = f->exp_table();
        for (int l = 0; l < pl->q1; ++l) {
            Fe v = exps[l];
            if (stamp[v] == gen) continue;
            if (cyclo && !pl->coset_min[l]) continue;
            if (chain && v >= upper) continue;
            out.push_back(v);
        }
        return out.size();
    }

    void enter_depth(int dd)
    {
        std::uint64_t full = compute_legal(dd, cand[dd]);
        // depth 0 is computed identically by every worker before partitioning;
        // only one of them records it so merged statistics match a solo run
        if (dd > 0 || worker_id == 0) {
            stats[dd].visits += 1;
            stats[dd].legal_total += full;
        }
        if (dd == 0 && worker_count > 1) {
            std::vector<Fe> mine;
            for (std::size_t i = worker_id; i < cand[0].size();
                 i += static_cast<std::size_t>(worker_count))
                mine.push_back(cand[0][i]);
            cand[0] = std::move(mine);
        }
        if (!opt->complete && cand[dd].size() > static_cast<std::size_t>(opt->probe_width)) {
            // seeded subsample without replacement, kept in ascending order
            std::vector<std::size_t> idx(cand[dd].size());
            for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
            for (int i = 0; i < opt->probe_width; ++i) {
                std::uniform_int_distribution<std::size_t> dist(i, idx.size() - 1);
                std::swap(idx[i], idx[dist(rng)]);
            }
            idx.resize(opt->probe_width);
            std::sort(idx.begin(), idx.end());
            std::vector<Fe> picked;
            picked.reserve(idx.size());
            for (std::size_t i : idx) picked.push_back(cand[dd][i]);
            cand[dd] = std::move(picked);
        }
        cur[dd] = 0;
    }

    bool over_budget()
    {
        if (node_budget > 0 && global_nodes->load(std::memory_order_relaxed) >= node_budget)
            return true;
        if (use_deadline && (nodes & 0xFFF) == 0 &&
            std::chrono::steady_clock::now() > deadline)
            return true;
        return false;
    }

    void save_checkpoint() const;

    void run()
    {
        int depths = static_cast<int>(pl->walk.size());
        if (depths == 0) {
            // nothing to assign: the pinned prefix already realizes the target
            completions = 1;
            exhausted = true;
            return;
        }
        if (!entered) {
            enter_depth(0);
            entered = true;
        }
        if (next_ckpt == 0) next_ckpt = nodes + opt->checkpoint_every;
        const bool stop_on_full = opt->stop_on_success && !opt->full_traversal;
        for (;;) {
            if (over_budget()) {
                budget_hit = true;
                break;
            }
            if (cur[d] < cand[d].size()) {
                if (d + 1 == depths && !opt->trace) {
                    // leaf level: every candidate is a completion, consume the
                    // list in one step
                    std::size_t cnt = cand[d].size() - cur[d];
                    nodes += cnt;
                    stats[d].assigns += cnt;
                    global_nodes->fetch_add(cnt, std::memory_order_relaxed);
                    completions += cnt;
                    if (d > deepest) {
                        deepest = d;
                        deepest_vals.assign(assign.begin(), assign.begin() + d);
                        deepest_vals.push_back(cand[d][cur[d]]);
                    }
                    if (first_full.empty()) {
                        first_full.assign(assign.begin(), assign.begin() + d);
                        first_full.push_back(cand[d][cur[d]]);
                    }
                    cur[d] = cand[d].size();
                    if (stop_on_full) {
                        stopped = true;
                        break;
                    }
                    continue;
                }
                Fe v = cand[d][cur[d]++];
                assign[d] = v;
                V[pl->slot_of(pl->walk[d].deg, pl->walk[d].pos)] = v;
                if (pl->incremental && d + 1 < depths)
                    for (std::int32_t id : pl->reg_groups[d])
                        detval[id] = static_cast<Fe>(f->mul(c1cache[id], v) ^ c0cache[id]);
                ++nodes;
                ++stats[d].assigns;
                global_nodes->fetch_add(1, std::memory_order_relaxed);
                if (opt->trace) {
                    std::vector<Fe> prefix(assign.begin(), assign.begin() + d + 1);
                    opt->trace(d, prefix);
                }
                if (d > deepest) {
                    deepest = d;
                    deepest_vals.assign(assign.begin(), assign.begin() + d + 1);
                }
                if (d + 1 == depths) {
                    ++completions;
                    if (first_full.empty())
                        first_full.assign(assign.begin(), assign.end());
                    if (stop_on_full) {
                        stopped = true;
                        break;
                    }
                } else {
                    ++d;
                    enter_depth(d);
                }
            } else {
                if (d == 0) {
                    exhausted = true;
                    break;
                }
                --d;
            }
            if (opt->checkpoint_every > 0 && worker_count == 1 && nodes >= next_ckpt) {
                save_checkpoint();
                next_ckpt = nodes + opt->checkpoint_every;
            }
        }
    }
};

// ---- checkpoint serialization -------------------------------------------

void put_u32(std::ostream& o, std::uint32_t v) { o.write(reinterpret_cast<char*>(&v), 4); }
void put_u64(std::ostream& o, std::uint64_t v) { o.write(reinterpret_cast<char*>(&v), 8); }
void put_u16(std::ostream& o, std::uint16_t v) { o.write(reinterpret_cast<char*>(&v), 2); }
void put_u8(std::ostream& o, std::uint8_t v) { o.write(reinterpret_cast<char*>(&v), 1); }

std::uint32_t get_u32(std::istream& i)
{
    std::uint32_t v;
    i.read(reinterpret_cast<char*>(&v), 4);
    return v;
}
std::uint64_t get_u64(std::istream& i)
{
    std::uint64_t v;
    i.read(reinterpret_cast<char*>(&v), 8);
    return v;
}
std::uint16_t get_u16(std::istream& i)
{
    std::uint16_t v;
    i.read(reinterpret_cast<char*>(&v), 2);
    return v;
}
std::uint8_t get_u8(std::istream& i)
{
    std::uint8_t v;
    i.read(reinterpret_cast<char*>(&v), 1);
    return v;
}

constexpr char kCkptMagic[9] = "MDSCKPT1";

void Worker::save_checkpoint() const
{
    std::ofstream o(opt->checkpoint_path, std::ios::binary | std::ios::trunc);
    if (!o) throw Error("cannot open checkpoint file " + opt->checkpoint_path);
    o.write(kCkptMagic, 8);
    put_u32(o, 1);
    put_u32(o, static_cast<std::uint32_t>(f->m()));
    put_u32(o, f->poly_mask());
    put_u32(o, static_cast<std::uint32_t>(pl->n));
    put_u32(o, static_cast<std::uint32_t>(pl->target));
    put_u8(o, opt->complete);
    put_u8(o, opt->stop_on_success);
    put_u8(o, opt->full_traversal);
    put_u8(o, opt->symmetry_filters);
    put_u32(o, static_cast<std::uint32_t>(opt->probe_width));
    put_u64(o, opt->seed);
    put_u64(o, opt->node_budget);
    put_u64(o, opt->checkpoint_every);

    int depths = static_cast<int>(pl->walk.size());
    put_u32(o, static_cast<std::uint32_t>(depths));
    put_u32(o, static_cast<std::uint32_t>(d));
    for (int i = 0; i < depths; ++i) put_u16(o, assign[i]);
    for (int i = 0; i <= d; ++i) {
        put_u64(o, cur[i]);
        put_u32(o, static_cast<std::uint32_t>(cand[i].size()));
        for (Fe v : cand[i]) put_u16(o, v);
    }
    for (int i = 0; i < depths; ++i) {
        put_u64(o, stats[i].visits);
        put_u64(o, stats[i].assigns);
        put_u64(o, stats[i].legal_total);
    }
    put_u64(o, nodes);
    put_u64(o, completions);
    put_u32(o, static_cast<std::uint32_t>(deepest + 1));
    for (Fe v : deepest_vals) put_u16(o, v);
    put_u8(o, first_full.empty() ? 0 : 1);
    if (!first_full.empty())
        for (Fe v : first_full) put_u16(o, v);
    std::ostringstream rs;
    rs << rng;
    std::string rstate = rs.str();
    put_u32(o, static_cast<std::uint32_t>(rstate.size()));
    o.write(rstate.data(), static_cast<std::streamsize>(rstate.size()));
}

// ---- result assembly ------------------------------------------------------

std::vector<int> log_seq(const Field& f, const std::vector<Fe>& vals)
{
    std::vector<int> out;
    out.reserve(vals.size());
    for (Fe v : vals) out.push_back(f.log(v));
    return out;
}

Code code_from_prefix(const Plan& pl, const std::vector<Fe>& vals, int rows_through)
{
    std::vector<std::vector<Fe>> rows(rows_through + 1, std::vector<Fe>(pl.k, 0));
    for (int j = 1; j <= pl.k; ++j) rows[0][j - 1] = 1;
    if (rows_through >= 1 && pl.k >= 1) rows[1][pl.k - 1] = 1;
    for (std::size_t dd = 0; dd < vals.size() && dd < pl.walk.size(); ++dd) {
        const WalkPos w = pl.walk[dd];
        if (w.deg <= rows_through) rows[w.deg][w.pos - 1] = vals[dd];
    }
    return Code(pl.field, pl.n, std::move(rows));
}

SearchResult merge_workers(const Plan& pl, std::vector<Worker>& ws, bool stop_on_full)
{
    const Field& f = *pl.field;
    SearchResult res;
    res.target_distance = pl.target;
    int depths = static_cast<int>(pl.walk.size());
    res.stats.assign(depths, {});
    bool all_exhausted = true;
    for (Worker& w : ws) {
        res.nodes += w.nodes;
        res.completions += w.completions;
        res.budget_exceeded |= w.budget_hit;
        if (!w.exhausted) all_exhausted = false;
        for (int i = 0; i < depths; ++i) {
            res.stats[i].visits += w.stats[i].visits;
            res.stats[i].assigns += w.stats[i].assigns;
            res.stats[i].legal_total += w.stats[i].legal_total;
        }
        if (w.deepest > res.deepest_depth ||
            (w.deepest == res.deepest_depth && w.deepest >= 0 &&
             (res.deepest_values.empty() ||
              log_seq(f, w.deepest_vals) < log_seq(f, res.deepest_values))))
        {
            res.deepest_depth = w.deepest;
            res.deepest_values = w.deepest_vals;
        }
        if (!w.first_full.empty() &&
            (res.first_full_values.empty() ||
             log_seq(f, w.first_full) < log_seq(f, res.first_full_values)))
            res.first_full_values = w.first_full;
    }
    res.found = res.completions > 0;
    // a worker that stopped at its first completion still leaves the verdict
    // "found"; exhausted only makes sense when nothing stopped early
    res.exhausted = all_exhausted && !res.budget_exceeded;
    if (stop_on_full && res.found) res.exhausted = false;

    // deepest fully assigned degree row -> certified code
    int row = (pl.k == 1) ? 1 : 0;  // r(1,1) is pinned to 1 for k = 1
    if (depths == 0 && res.found) row = pl.D;
    for (int i = 1; i <= pl.D; ++i) {
        int end = pl.depth_of(i, 1);
        if (end >= 0 && end <= res.deepest_depth) row = std::max(row, i);
    }
    res.achieved_delta = row + 2;
    Code best = code_from_prefix(pl, res.deepest_values, row);
    // independent full check of the emitted code (not the search caches)
    if (!is_k_superregular(best, row).ok)
        throw Error("internal error: emitted code fails the from-scratch check");
    res.best = best;
    return res;
}

SearchResult run_plan(const Plan& pl, const SearchOptions& opt,
                      Worker* resumed_single = nullptr)
{
    int jobs = std::max(1, opt.jobs);
    if (pl.walk.empty() || resumed_single) jobs = 1;

    std::atomic<std::uint64_t> global_nodes{resumed_single ? resumed_single->nodes : 0};
    auto deadline = std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(opt.time_budget_s));

    std::vector<Worker> ws;
    if (resumed_single) {
        ws.push_back(std::move(*resumed_single));
        ws[0].global_nodes = &global_nodes;
        ws[0].node_budget = opt.node_budget;
        ws[0].use_deadline = opt.time_budget_s > 0;
        ws[0].deadline = deadline;
        ws[0].run();
    } else {
        ws.resize(jobs);
        for (int w = 0; w < jobs; ++w) {
            ws[w].pl = &pl;
            ws[w].f = pl.field.get();
            ws[w].opt = &opt;
            ws[w].worker_id = w;
            ws[w].worker_count = jobs;
            ws[w].global_nodes = &global_nodes;
            ws[w].node_budget = opt.node_budget;
            ws[w].use_deadline = opt.time_budget_s > 0;
            ws[w].deadline = deadline;
            ws[w].init();
        }
        if (jobs == 1) {
            ws[0].run();
        } else {
            std::vector<std::thread> pool;
            for (int w = 0; w < jobs; ++w) pool.emplace_back([&ws, w] { ws[w].run(); });
            for (auto& t : pool) t.join();
        }
    }
    bool stop_on_full = opt.stop_on_success && !opt.full_traversal;
    return merge_workers(pl, ws, stop_on_full);
}

}  // namespace

SearchResult run_search(FieldPtr field, int n, const SearchOptions& opt)
{
    Plan pl = build_plan(std::move(field), n, opt.target_distance);
    return run_plan(pl, opt);
}

SearchResult resume_search(const std::string& checkpoint_path, std::uint64_t node_budget,
                           double time_budget_s)
{
    std::ifstream in(checkpoint_path, std::ios::binary);
    if (!in) throw Error("cannot open checkpoint " + checkpoint_path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kCkptMagic, 8) != 0)
        throw ParseError("bad checkpoint magic", 1, 1);
    if (get_u32(in) != 1) throw ParseError("unsupported checkpoint version", 1, 9);

    int m = static_cast<int>(get_u32(in));
    std::uint32_t poly = get_u32(in);
    int n = static_cast<int>(get_u32(in));
    int target = static_cast<int>(get_u32(in));

    SearchOptions opt;
    opt.target_distance = target;
    opt.complete = get_u8(in);
    opt.stop_on_success = get_u8(in);
    opt.full_traversal = get_u8(in);
    opt.symmetry_filters = get_u8(in);
    opt.probe_width = static_cast<int>(get_u32(in));
    opt.seed = get_u64(in);
    get_u64(in);  // checkpointed node budget: superseded by the caller's
    opt.node_budget = node_budget;
    opt.time_budget_s = time_budget_s;
    opt.checkpoint_every = get_u64(in);
    opt.checkpoint_path = checkpoint_path;
    opt.jobs = 1;

    Plan pl = build_plan(Field::make(m, poly), n, target);

    Worker w;
    w.pl = &pl;
    w.f = pl.field.get();
    w.opt = &opt;
    w.worker_id = 0;
    w.worker_count = 1;
    w.init();
    w.entered = true;

    int depths = static_cast<int>(get_u32(in));
    if (depths != static_cast<int>(pl.walk.size()))
        throw ParseError("checkpoint depth count mismatch", 1, 1);
    w.d = static_cast<int>(get_u32(in));
    for (int i = 0; i < depths; ++i) w.assign[i] = get_u16(in);
    for (int i = 0; i <= w.d; ++i) {
        w.cur[i] = get_u64(in);
        std::uint32_t sz = get_u32(in);
        w.cand[i].resize(sz);
        for (std::uint32_t j = 0; j < sz; ++j) w.cand[i][j] = get_u16(in);
    }
    for (int i = 0; i < depths; ++i) {
        w.stats[i].visits = get_u64(in);
        w.stats[i].assigns = get_u64(in);
        w.stats[i].legal_total = get_u64(in);
    }
    w.nodes = get_u64(in);
    w.completions = get_u64(in);
    std::uint32_t dn = get_u32(in);
    w.deepest = static_cast<int>(dn) - 1;
    w.deepest_vals.resize(dn);
    for (std::uint32_t i = 0; i < dn; ++i) w.deepest_vals[i] = get_u16(in);
    if (get_u8(in)) {
        w.first_full.resize(depths);
        for (int i = 0; i < depths; ++i) w.first_full[i] = get_u16(in);
    }
    std::uint32_t rlen = get_u32(in);
    std::string rstate(rlen, '\0');
    in.read(rstate.data(), rlen);
    std::istringstream rs(rstate);
    rs >> w.rng;
    if (!in) throw ParseError("truncated checkpoint", 1, 1);

    // restore assigned value slots and the incremental caches for the prefix
    for (int i = 0; i < w.d; ++i)
        w.V[pl.slot_of(pl.walk[i].deg, pl.walk[i].pos)] = w.assign[i];
    std::vector<Fe> scratch;
    for (int i = 0; i <= w.d && i < static_cast<int>(pl.walk.size()); ++i) {
        w.compute_legal(i, scratch);  // refills c0/c1 caches at depth i
        if (i < w.d)
            for (std::int32_t id : pl.reg_groups[i])
                w.detval[id] =
                    static_cast<Fe>(pl.field->mul(w.c1cache[id], w.assign[i]) ^ w.c0cache[id]);
    }

    return run_plan(pl, opt, &w);
}

// ---- manual driver for tests ----------------------------------------------

struct Searcher::Impl {
    Plan pl;
    SearchOptions opt;
    Worker w;
};

Searcher::Searcher(FieldPtr field, int n, int target_distance, bool symmetry_filters)
    : impl_(new Impl)
{
    impl_->pl = build_plan(std::move(field), n, target_distance, /*linked_only=*/false);
    impl_->opt.target_distance = target_distance;
    impl_->opt.symmetry_filters = symmetry_filters;
    impl_->opt.complete = true;
    impl_->w.pl = &impl_->pl;
    impl_->w.f = impl_->pl.field.get();
    impl_->w.opt = &impl_->opt;
    impl_->w.init();
}

Searcher::~Searcher() { delete impl_; }

int Searcher::depth_count() const { return static_cast<int>(impl_->pl.walk.size()); }

WalkPos Searcher::walk(int depth) const { return impl_->pl.walk[depth]; }

void Searcher::set_prefix(const std::vector<Fe>& values)
{
    Worker& w = impl_->w;
    const Plan& pl = impl_->pl;
    if (values.size() > pl.walk.size()) throw Error("prefix longer than the walk");
    for (std::size_t i = 0; i < values.size(); ++i) {
        w.assign[i] = values[i];
        w.V[pl.slot_of(pl.walk[i].deg, pl.walk[i].pos)] = values[i];
    }
    w.d = static_cast<int>(values.size());
}

std::vector<Fe> Searcher::legal_values(int depth) const
{
    Worker& w = impl_->w;
    if (depth != w.d) throw Error("legal_values needs the depth right after the prefix");
    std::vector<Fe> out;
    w.compute_legal(depth, out);
    return out;
}

EstablishResult establish_delta(FieldPtr field, int n, std::uint64_t node_budget_per_level,
                                int jobs)
{
    EstablishResult res{2, true};
    int cap = max_distance_bound(*field, n);
    for (int target = 3;; ++target) {
        if (target > cap) return res;  // the combinatorial bound rules everything above out
        SearchOptions o;
        o.target_distance = target;
        o.complete = true;
        o.stop_on_success = true;
        o.symmetry_filters = true;
        o.node_budget = node_budget_per_level;
        o.jobs = jobs;
        SearchResult r = run_search(field, n, o);
        if (r.found) {
            res.delta = target;
        } else if (r.exhausted) {
            return res;
        } else {
            res.exact = false;
            return res;
        }
    }
}

}  // namespace mdsconv
