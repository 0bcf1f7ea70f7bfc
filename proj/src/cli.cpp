#include "brstkit/cli.hpp"

#include "brstkit/errors.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <random>
#include <set>

namespace brstkit::cli {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Configuration

namespace {

template <class T>
T get_typed(const Json& v, const std::string& key) {
    try {
        return v.get<T>();
    } catch (const Json::exception&) {
        throw InputError("config key '" + key + "' has the wrong type: " + v.dump());
    }
}

int env_int(const char* name, int fallback) {
    const char* v = std::getenv(name);
    if (!v || !*v) return fallback;
    char* end = nullptr;
    const long x = std::strtol(v, &end, 10);
    if (*end != '\0' || x < 0) throw InputError(std::string(name) + " must be a non-negative integer");
    return static_cast<int>(x);
}

}  // namespace

RunConfig config_from_json(const Json& doc, const std::string& base_dir) {
    if (!doc.is_object()) throw InputError("config must be a JSON object");
    RunConfig c;
    c.base_dir = base_dir;
    for (const auto& [k, v] : doc.items()) {
        if (k == "algebra") c.algebra = get_typed<std::string>(v, k);
        else if (k == "grading") c.grading = v;
        else if (k == "e") c.e = v;
        else if (k == "a") c.a = get_typed<int>(v, k);
        else if (k == "polarization") c.polarization = v;
        else if (k == "level") c.level = rat_from_json(v);
        else if (k == "beta") c.beta = v;
        else if (k == "isotropic") c.isotropic = v;
        else if (k == "pair") c.pair = v;
        else if (k == "complex") c.complex = get_typed<std::string>(v, k);
        else if (k == "suite") c.suite = get_typed<std::string>(v, k);
        else if (k == "suites") c.suites = get_typed<std::vector<std::string>>(v, k);
        else if (k == "window") {
            if (!v.is_object()) throw InputError("config key 'window' must be an object");
            for (const auto& [wk, wv] : v.items()) {
                if (wk == "cutoff") c.cutoff = get_typed<int>(wv, "window.cutoff");
                else if (wk == "max_bosons") c.max_bosons = get_typed<int>(wv, "window.max_bosons");
                else if (wk == "budget") c.budget = get_typed<std::size_t>(wv, "window.budget");
                else throw InputError("unknown config key 'window." + wk + "'");
            }
        } else if (k == "cutoffs") c.cutoffs = get_typed<std::vector<int>>(v, k);
        else if (k == "samples") c.samples = get_typed<int>(v, k);
        else if (k == "seed") c.seed = get_typed<std::uint64_t>(v, k);
        else if (k == "max_mode") c.max_mode = get_typed<int>(v, k);
        else if (k == "search_bound") c.search_bound = get_typed<int>(v, k);
        else if (k == "output_dir") c.output_dir = get_typed<std::string>(v, k);
        else if (k == "threads") c.threads = get_typed<int>(v, k);
        else if (k == "timing") c.timing = get_typed<bool>(v, k);
        else throw InputError("unknown config key '" + k + "'");
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    auto doc = read_json_file(path);
    auto dir = fs::path(path).parent_path().string();
    return config_from_json(doc, dir.empty() ? "." : dir);
}

void apply_env(RunConfig& cfg) {
    cfg.threads = env_int(kThreadsEnv, cfg.threads);
    if (const char* d = std::getenv(kOutputDirEnv); d && *d) cfg.output_dir = d;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"gamma",       "square-zero",   "commutator", "basis-independence",
                                                "uniqueness",  "twisted-action", "clifford",   "heisenberg"};
    return names;
}

// ---------------------------------------------------------------------------
// Shared setup

namespace {

void check_config(const RunConfig& cfg) {
    if (cfg.budget < 1) throw InputError("window budget must be at least 1");
    if (cfg.samples < 1) throw InputError("samples must be at least 1");
    if (cfg.max_mode < 0) throw InputError("max_mode must be non-negative");
    if (cfg.max_bosons < 0) throw InputError("max_bosons must be non-negative");
    if (cfg.threads < 0) throw InputError("threads must be non-negative");
}

std::string resolve(const RunConfig& cfg, const std::string& p) {
    fs::path path(p);
    if (path.is_absolute()) return p;
    return (fs::path(cfg.base_dir) / path).lexically_normal().string();
}

Json maybe_file(const RunConfig& cfg, const Json& v) {
    if (v.is_string()) return read_json_file(resolve(cfg, v.get<std::string>()));
    return v;
}

Polarization polarization_of(const Json& v) {
    if (v.is_string()) return Polarization::preset(v.get<std::string>());
    if (v.is_object()) {
        try {
            return Polarization::custom(v.at("iota_from").get<int>(), v.at("eps_from").get<int>(),
                                        v.at("boson_from").get<int>());
        } catch (const Json::exception&) {
            throw InputError("custom polarization needs integer iota_from, eps_from, boson_from");
        }
    }
    throw InputError("polarization must be a preset name or an object");
}

std::string polarization_name(const Polarization& p) {
    return p.name + "(" + std::to_string(p.iota_from) + "," + std::to_string(p.eps_from) + "," +
           std::to_string(p.boson_from) + ")";
}

Json triple_json(const TripleReport& r) {
    Json j{{"ok", r.ok}};
    if (!r.ok) {
        j["triple"] = Json::array({r.i, r.j, r.k});
        j["detail"] = r.detail;
    }
    return j;
}

AlgebraFile load_checked_algebra(const RunConfig& cfg) {
    if (cfg.algebra.empty()) throw InputError("no algebra file given");
    return load_algebra(resolve(cfg, cfg.algebra));
}

Grading grading_of(const RunConfig& cfg, const AlgebraFile& af) {
    if (cfg.grading) {
        const Json g = maybe_file(cfg, *cfg.grading);
        if (g.is_object() && g.contains("element") && g.size() == 1) {
            try {
                return grading_from_element(*af.alg, parse_element(*af.alg, g["element"]));
            } catch (const InputError&) {
                throw;
            } catch (const std::invalid_argument& e) {
                throw InputError(std::string("grading element: ") + e.what());
            }
        }
        if (g.is_object() && g.contains("degrees") && g.size() == 1) return parse_grading(*af.alg, g["degrees"]);
        throw InputError("config 'grading' must be {\"element\": ...} or {\"degrees\": ...}");
    }
    if (af.grading) return *af.grading;
    throw InputError("no grading: give one in the algebra file or the config");
}

/// Algebra, structure checks (refusing on failure) and the reduction datum.
ReductionDatum load_datum(const RunConfig& cfg) {
    auto af = load_checked_algebra(cfg);
    if (auto j = verify_jacobi(*af.alg); !j.ok) throw PreconditionFailure("Jacobi identity fails: " + j.detail);
    if (af.alg->has_form())
        if (auto f = verify_form(*af.alg, af.alg->form()); !f.ok)
            throw PreconditionFailure("form is not invariant: " + f.detail);
    auto grading = grading_of(cfg, af);
    if (auto g = verify_grading(*af.alg, grading); !g.ok) throw PreconditionFailure("grading fails: " + g.detail);
    if (!cfg.e) throw InputError("no nilpotent element 'e' given");
    return make_datum(af.alg, grading, parse_element(*af.alg, *cfg.e), cfg.a);
}

struct PairChoice {
    AdmissiblePair pair;
    Json info;
};

PairChoice pair_of(const RunConfig& cfg, const ReductionDatum& datum) {
    PairChoice out;
    if (cfg.pair) {
        auto doc = maybe_file(cfg, *cfg.pair);
        if (!doc.is_object() || !doc.contains("m") || !doc.contains("n"))
            throw InputError("pair must be an object with 'm' and 'n'");
        out.pair.m = parse_subspace(*datum.alg, doc["m"]);
        out.pair.n = parse_subspace(*datum.alg, doc["n"]);
        if (!is_graded_subspace(datum.grading, out.pair.m) || !is_graded_subspace(datum.grading, out.pair.n))
            throw InputError("pair subspaces must be graded");
        out.info = Json{{"source", "file"}};
        return out;
    }
    SubspaceChoice choice;
    choice.complement = window_complement(datum);
    if (cfg.isotropic) choice.isotropic = parse_subspace(*datum.alg, maybe_file(cfg, *cfg.isotropic));
    auto pc = construct_admissible_pair(datum, choice);
    if (!pc.ok()) throw PreconditionFailure("constructed pair fails its closure checks: " + pc.detail);
    out.pair = pc.pair;
    out.info = Json{{"source", "isotropic"}, {"l", subspace_json(choice.isotropic)}};
    return out;
}

ComplexKind kind_of(const std::string& s) {
    if (s == "adjusted") return ComplexKind::Adjusted;
    if (s == "ordinary") return ComplexKind::Ordinary;
    if (s == "ordinary-twisted") return ComplexKind::OrdinaryTwisted;
    throw InputError("unknown complex '" + s + "' (adjusted | ordinary | ordinary-twisted | compare)");
}

std::optional<OneForm> beta_override(const RunConfig& cfg, const ReductionDatum& datum, const AdmissiblePair& pair) {
    if (cfg.beta.is_string()) {
        const auto s = cfg.beta.get<std::string>();
        if (s == "beta_e") return std::nullopt;
        if (s == "zero") return OneForm{};
        throw InputError("beta must be \"beta_e\", \"zero\" or an explicit list");
    }
    auto loop = LoopAlgebra::create(datum.alg, independent_subset(pair.n, datum.dim()));
    return parse_one_form(*loop, cfg.beta);
}

struct Instance {
    ReductionDatum datum;
    PairChoice pair;
    WComplex c;
    Polarization pol;
};

Instance instance_of(const RunConfig& cfg, ComplexKind kind) {
    Instance in{load_datum(cfg), {}, {}, polarization_of(cfg.polarization)};
    in.pair = pair_of(cfg, in.datum);
    in.c = build_w_complex(in.datum, in.pair.pair, cfg.level, in.pol, kind, beta_override(cfg, in.datum, in.pair.pair));
    return in;
}

/// Deterministic subsample (Fisher-Yates on the raw generator output), returned in canonical order.
std::vector<TensorMono> sample(const std::vector<TensorMono>& pool, std::size_t n, std::uint64_t seed) {
    if (n >= pool.size()) return pool;
    std::vector<std::size_t> idx(pool.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::mt19937_64 rng(seed);
    for (std::size_t i = idx.size() - 1; i > 0; --i) std::swap(idx[i], idx[rng() % (i + 1)]);
    idx.resize(n);
    std::sort(idx.begin(), idx.end());
    std::vector<TensorMono> out;
    for (auto i : idx) out.push_back(pool[i]);
    return out;
}

std::vector<LoopElement> basis_modes(const LoopAlgebra& loop, int max_mode) {
    std::vector<LoopElement> xs;
    for (int n = -max_mode; n <= max_mode; ++n)
        for (std::size_t i = 0; i < loop.rank(); ++i) xs.push_back(loop.mode_element(i, n));
    return xs;
}

std::vector<std::pair<LoopElement, LoopElement>> random_pairs(const LoopAlgebra& loop, int max_mode, int count,
                                                              std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto span = static_cast<std::uint64_t>(2 * max_mode + 1);
    auto pick = [&] {
        const auto i = static_cast<std::size_t>(rng() % loop.rank());
        const int n = static_cast<int>(rng() % span) - max_mode;
        return loop.mode_element(i, n);
    };
    std::vector<std::pair<LoopElement, LoopElement>> out;
    for (int k = 0; k < count; ++k) {
        auto x = pick();
        out.emplace_back(x, pick());
    }
    return out;
}

std::string mode_name(const LoopAlgebra& loop, const LoopElement& x) {
    for (std::size_t i = 0; i < x.coeffs.size(); ++i)
        if (x.coeffs[i] != 0) {
            bool unit = x.coeffs[i] == 1;
            for (std::size_t j = i + 1; j < x.coeffs.size() && unit; ++j) unit = x.coeffs[j] == 0;
            if (unit) return loop.label(i) + "⊗t^" + std::to_string(x.mode);
            break;
        }
    std::string s = "(";
    for (std::size_t i = 0; i < x.coeffs.size(); ++i) s += (i ? "," : "") + format_rat(x.coeffs[i]);
    return s + ")⊗t^" + std::to_string(x.mode);
}

Json sweep_json(const SweepReport& r) {
    Json w = Json::array();
    for (const auto& x : r.witnesses) w.push_back(Json{{"probe", x.probe}, {"state", x.state}, {"residual", x.residual}});
    return Json{{"name", r.suite}, {"checked", r.checked}, {"ok", r.ok()}, {"witnesses", w}};
}

struct Checks {
    Json list = Json::array();
    bool ok = true;
    std::size_t checked = 0;
    void add(const SweepReport& r) {
        list.push_back(sweep_json(r));
        ok = ok && r.ok();
        checked += r.checked;
    }
    void add(const std::string& name, std::size_t n, std::vector<Witness> w) {
        SweepReport r;
        r.suite = name;
        r.checked = n;
        if (w.size() > kMaxWitnesses) w.resize(kMaxWitnesses);
        r.witnesses = std::move(w);
        add(r);
    }
};

Json window_json(const RunConfig& cfg, const Window& w) {
    return Json{{"cutoff", cfg.cutoff},           {"max_bosons", cfg.max_bosons}, {"budget", cfg.budget},
                {"size", w.basis.size()},         {"closed", w.closed},           {"seed_size", w.seed.size()}};
}

Json instance_json(const RunConfig& cfg, const Instance& in) {
    const auto& loop = *in.c.setup.loop;
    Json n = Json::array();
    for (std::size_t i = 0; i < loop.rank(); ++i) n.push_back(loop.label(i));
    Json f = Json::array();
    for (const auto& l : in.c.labels.boson) f.push_back(l);
    return Json{{"algebra", in.datum.alg->name()},
                {"complex", kind_name(in.c.kind)},
                {"polarization", polarization_name(in.pol)},
                {"level", format_rat(cfg.level)},
                {"n_basis", n},
                {"F_basis", f},
                {"beta", one_form_json(loop, in.c.beta)}};
}

// ---------------------------------------------------------------------------
// Suites

void suite_gamma(const RunConfig& cfg, const Instance& in, Checks& checks, Json& extra) {
    const auto& loop = in.c.setup.loop;
    const auto& beta = in.c.beta;
    AnomalyForm closed{loop, beta};
    const auto xs = basis_modes(*loop, cfg.max_mode);
    const auto support = beta.support_modes();
    std::vector<Rat> measured(xs.size() * xs.size());
    for_each_index(measured.size(), [&](std::size_t k) {
        measured[k] = gamma(loop, in.pol, beta, xs[k / xs.size()], xs[k % xs.size()]);
    });
    std::vector<Witness> closed_w, skew_w, support_w;
    Json table = Json::array();
    for (std::size_t a = 0; a < xs.size(); ++a)
        for (std::size_t b = 0; b < xs.size(); ++b) {
            const Rat& g = measured[a * xs.size() + b];
            const std::string probe = "γ(" + mode_name(*loop, xs[a]) + ", " + mode_name(*loop, xs[b]) + ")";
            if (g != closed(xs[a], xs[b]))
                closed_w.push_back({probe, "ω_0", format_rat(g) + " vs -β([x,y]) = " + format_rat(closed(xs[a], xs[b]))});
            if (g != -measured[b * xs.size() + a]) skew_w.push_back({probe, "ω_0", "not skew"});
            if (g != 0) {
                if (support.size() == 1 && xs[a].mode + xs[b].mode != support[0])
                    support_w.push_back({probe, "ω_0", "nonzero off the mode sum " + std::to_string(support[0])});
                if (a < b) table.push_back(Json::array({mode_name(*loop, xs[a]), mode_name(*loop, xs[b]), format_rat(g)}));
            }
        }
    checks.add("closed-form", measured.size(), closed_w);
    checks.add("skew-symmetry", measured.size(), skew_w);
    checks.add("mode-support", measured.size(), support_w);

    // 2-cocycle identity on random triples.
    std::mt19937_64 rng(cfg.seed);
    std::vector<Witness> cocycle_w;
    auto pick = [&] { return xs[rng() % xs.size()]; };
    for (int t = 0; t < cfg.samples; ++t) {
        auto x = pick(), y = pick(), z = pick();
        auto g = [&](const LoopElement& p, const LoopElement& q) {
            if (is_zero_vec(p.coeffs) || is_zero_vec(q.coeffs)) return Rat(0);
            return gamma(loop, in.pol, beta, p, q);
        };
        const Rat s = g(loop->bracket(x, y), z) + g(loop->bracket(y, z), x) + g(loop->bracket(z, x), y);
        if (s != 0)
            cocycle_w.push_back({mode_name(*loop, x) + ", " + mode_name(*loop, y) + ", " + mode_name(*loop, z), "ω_0",
                                 format_rat(s)});
    }
    checks.add("cocycle", static_cast<std::size_t>(cfg.samples), cocycle_w);

    // Centrality on a few window states.
    auto w = w_window(in.c, cfg.cutoff, cfg.max_bosons, cfg.budget);
    auto states = sample(w.basis, 5, cfg.seed + 1);
    auto pairs = random_pairs(*loop, cfg.max_mode, cfg.samples, cfg.seed + 2);
    std::vector<Witness> central_w;
    std::size_t n = 0;
    for (const auto& [x, y] : pairs)
        for (const auto& s : states) {
            ++n;
            auto r = gamma_defect(loop, in.pol, beta, x, y, closed(x, y), s);
            if (!r.empty())
                central_w.push_back({"γ(" + mode_name(*loop, x) + ", " + mode_name(*loop, y) + ")",
                                     render(s, in.c.labels), render(r, in.c.labels)});
        }
    checks.add("centrality", n, central_w);
    extra["nonzero_values"] = table;
    extra["max_mode"] = cfg.max_mode;
}

void suite_square_zero(const RunConfig& cfg, const Instance& in, Checks& checks, Json& extra) {
    auto d = memoize(in.c.d);
    auto w = grow_window(d, enumerate_monomials(in.c.space, cfg.cutoff, cfg.max_bosons), cfg.budget);
    extra["window"] = window_json(cfg, w);
    const auto sq = verify_square_zero(d, w.basis, in.c.labels);
    checks.add(sq);
    checks.add(verify_charge(d, w.basis, in.c.labels));
    const bool adjusted = in.c.kind == ComplexKind::Adjusted;
    auto states = sample(w.basis, static_cast<std::size_t>(cfg.samples), cfg.seed);
    checks.add(verify_window_stability(in.c.setup, adjusted, 2, states, in.c.labels));
    if (!sq.ok() && !adjusted) {
        // The defect [[d², ι(x)], ι(y)] must be the scalar -γ(x, y).
        auto pairs = random_pairs(*in.c.setup.loop, cfg.max_mode, cfg.samples, cfg.seed + 1);
        checks.add(verify_whynotzero(d, in.c.setup, pairs, sample(w.basis, 5, cfg.seed + 2), in.c.labels));
    }
}

void suite_commutator(const RunConfig& cfg, const Instance& in, Checks& checks, Json& extra) {
    const bool adjusted = in.c.kind == ComplexKind::Adjusted;
    auto w = w_window(in.c, cfg.cutoff, cfg.max_bosons, cfg.budget);
    extra["window"] = window_json(cfg, w);
    auto states = sample(w.basis, static_cast<std::size_t>(cfg.samples), cfg.seed);
    const auto& loop = *in.c.setup.loop;
    checks.add(verify_commutator(in.c.d, in.c.setup, adjusted, basis_modes(loop, cfg.max_mode), states, in.c.labels));
    auto pairs = random_pairs(loop, cfg.max_mode, cfg.samples, cfg.seed + 1);
    const bool homomorphism = adjusted || in.c.sector->dim() == 0 || in.c.beta.is_zero();
    if (homomorphism && in.c.kind != ComplexKind::OrdinaryTwisted)
        checks.add(verify_homomorphism(in.c.setup, adjusted, pairs, states, in.c.labels));
    if (adjusted) checks.add(verify_rhobar(in.c.setup, pairs, states, in.c.labels));
}

std::vector<std::pair<std::string, RatMatrix>> graded_transforms(const LoopAlgebra& loop,
                                                                 const std::optional<std::vector<int>>& degrees) {
    const std::size_t r = loop.rank();
    std::vector<std::pair<std::string, RatMatrix>> out;
    out.emplace_back("identity", identity_matrix(r));
    std::optional<std::pair<std::size_t, std::size_t>> same;
    for (std::size_t i = 0; i < r && !same; ++i)
        for (std::size_t j = i + 1; j < r && !same; ++j)
            if (!degrees || (*degrees)[i] == (*degrees)[j]) same = {i, j};
    if (same) {
        const auto [i, j] = *same;
        auto perm = identity_matrix(r);
        perm[i][i] = perm[j][j] = 0;
        perm[i][j] = perm[j][i] = 1;
        out.emplace_back("swap " + loop.label(i) + " " + loop.label(j), perm);
        auto sc = identity_matrix(r);
        sc[i][i] = 3;
        sc[j][j] = Rat(1, 3);
        out.emplace_back("scale " + loop.label(i) + " by 3, " + loop.label(j) + " by 1/3", sc);
        auto sh = identity_matrix(r);
        sh[i][j] = 1;
        out.emplace_back("shear " + loop.label(j) + " += " + loop.label(i), sh);
    } else if (r > 0) {
        auto sc = identity_matrix(r);
        sc[0][0] = 2;
        out.emplace_back("scale " + loop.label(0) + " by 2", sc);
    }
    return out;
}

void suite_basis_independence(const RunConfig& cfg, const Instance& in, Checks& checks, Json& extra) {
    const bool adjusted = in.c.kind == ComplexKind::Adjusted;
    auto w = w_window(in.c, cfg.cutoff, cfg.max_bosons, cfg.budget);
    extra["window"] = window_json(cfg, w);
    auto states = sample(w.basis, static_cast<std::size_t>(cfg.samples), cfg.seed);
    const auto& loop = *in.c.setup.loop;
    const auto degrees = loop.basis_degrees(in.datum.grading);
    Json names = Json::array();
    for (const auto& [name, t] : graded_transforms(loop, degrees)) {
        frame_from_transform(t, degrees);  // rejects non-graded transforms
        auto r = verify_basis_independence(in.c.setup, adjusted, t, states, in.c.labels);
        r.suite = "frame: " + name;
        checks.add(r);
        names.push_back(name);
    }
    checks.add(verify_pair_forms(in.c.setup, adjusted, states, in.c.labels));
    extra["transforms"] = names;
}

void suite_uniqueness(const RunConfig& cfg, const Instance& in, Checks& checks, Json& extra) {
    if (in.c.kind != ComplexKind::Adjusted && in.c.sector->dim() != 0)
        throw InputError("the uniqueness suite needs the adjusted complex (or F = 0)");
    auto w = w_window(in.c, cfg.cutoff, cfg.max_bosons, cfg.budget);
    extra["window"] = window_json(cfg, w);
    auto states = sample(w.basis, static_cast<std::size_t>(cfg.samples), cfg.seed);
    const auto& setup = in.c.setup;
    const auto& loop = *setup.loop;
    const auto xs = basis_modes(loop, cfg.max_mode);
    auto dbar = in.c.d;
    std::vector<std::pair<std::string, LazyOperator>> perturbations;
    perturbations.emplace_back("zero", zero_operator(1));
    perturbations.emplace_back("2 ε(" + loop.label(0) + "*, -2)", scale(eps_op(setup.pol, unit_vec(loop.rank(), 0), -2), 2));
    const auto transforms = graded_transforms(loop, loop.basis_degrees(in.datum.grading));
    DiffOptions other;
    other.frame = frame_from_transform(transforms.back().second, std::nullopt);
    auto d_other = in.c.kind == ComplexKind::Adjusted ? d_adjusted(setup, other) : d_ordinary(setup, other);
    perturbations.emplace_back("d' - d (" + transforms.back().first + ")", sum(d_other, scale(dbar, -1)));
    Json rows = Json::array();
    std::vector<Witness> wit;
    std::size_t checked = 0;
    for (const auto& [name, p] : perturbations) {
        auto r = verify_uniqueness(dbar, p, setup, xs, states);
        checked += r.checked;
        rows.push_back(Json{{"perturbation", name},
                            {"hypothesis_holds", r.hypothesis_holds},
                            {"perturbation_vanishes", r.perturbation_vanishes},
                            {"implication_ok", r.implication_ok()},
                            {"detail", r.detail}});
        if (!r.implication_ok()) wit.push_back({name, "window", r.detail});
    }
    checks.add("implication", checked, wit);
    extra["perturbations"] = rows;
}

void suite_twisted_action(const RunConfig& cfg, const Instance& in, Checks& checks, Json& extra) {
    const auto& loop = in.c.setup.loop;
    // β' defaults to β_e whatever beta the complex uses.
    OneForm beta_prime = in.c.beta.is_zero() ? beta_e(in.datum, *loop) : in.c.beta;
    auto radical = gamma_radical(*loop, beta_prime);
    auto sector = std::make_shared<BosonSector>(loop, beta_prime, complement_choice(*loop, radical), radical);
    TwistedAction twisted(in.c.vacuum, beta_prime, sector, in.pol);
    MonomialSpace space{in.datum.dim(), 0, sector->dim(), in.pol};
    auto pool = enumerate_monomials(space, cfg.cutoff, cfg.max_bosons);
    auto states = sample(pool, static_cast<std::size_t>(cfg.samples), cfg.seed);
    auto pairs = random_pairs(*loop, cfg.max_mode, cfg.samples, cfg.seed + 1);
    checks.add(verify_twisted_action(twisted, *in.c.vacuum, *loop, beta_prime, pairs, states, in.c.labels));
    extra["beta_prime"] = one_form_json(*loop, beta_prime);
    extra["states"] = states.size();
}

void suite_clifford(const RunConfig& cfg, const Instance& in, Checks& checks, Json& extra) {
    const auto& loop = *in.c.setup.loop;
    const auto& pol = in.pol;
    auto w = w_window(in.c, cfg.cutoff, cfg.max_bosons, cfg.budget);
    auto states = sample(w.basis, static_cast<std::size_t>(cfg.samples), cfg.seed);
    struct Gen {
        FermionSym sym;
        LazyOperator op;
    };
    std::vector<Gen> gens;
    for (int n = -cfg.max_mode - 1; n <= cfg.max_mode; ++n)
        for (std::uint32_t i = 0; i < loop.rank(); ++i) {
            gens.push_back({{n, Family::Iota, i}, iota_op(pol, loop.mode_element(i, n))});
            gens.push_back({{n, Family::Eps, i}, eps_op(pol, unit_vec(loop.rank(), i), n)});
        }
    const std::size_t total = gens.size() * gens.size();
    std::vector<std::vector<Witness>> found(total);
    for_each_index(total, [&](std::size_t k) {
        const auto& a = gens[k / gens.size()];
        const auto& b = gens[k % gens.size()];
        auto anti = supercommutator(a.op, b.op);
        const Rat expect = (a.sym.family != b.sym.family && partner(a.sym) == b.sym) ? Rat(1) : Rat(0);
        for (const auto& s : states) {
            auto r = anti.apply(s);
            add_term(r, s, -expect);
            if (!r.empty()) {
                auto name = [&](const FermionSym& g) {
                    return std::string(g.family == Family::Iota ? "ι(" : "ε(") + loop.label(g.idx) +
                           (g.family == Family::Eps ? "*" : "") + "," + std::to_string(g.mode) + ")";
                };
                found[k].push_back({"{" + name(a.sym) + ", " + name(b.sym) + "}", render(s, in.c.labels),
                                    render(r, in.c.labels)});
            }
        }
    });
    std::vector<Witness> wit;
    for (auto& f : found)
        for (auto& x : f) wit.push_back(std::move(x));
    checks.add("anticommutators", total * states.size(), wit);
    extra["generators"] = gens.size();
}

void suite_heisenberg(const RunConfig& cfg, const Instance& in, Checks& checks, Json& extra) {
    const auto& sector = in.c.sector;
    const auto& loop = *in.c.setup.loop;
    extra["F_dim"] = sector->dim();
    if (sector->dim() == 0) {
        checks.add("heisenberg-law", 0, {});
        return;
    }
    auto space = in.c.space;
    space.boson_dim = sector->dim();
    auto pool = enumerate_monomials(space, cfg.cutoff, cfg.max_bosons);
    auto states = sample(pool, static_cast<std::size_t>(cfg.samples), cfg.seed);
    AnomalyForm g{in.c.setup.loop, sector->beta()};
    auto pairs = random_pairs(loop, cfg.max_mode, cfg.samples, cfg.seed + 1);
    std::vector<Witness> wit;
    std::size_t n = 0;
    for (const auto& [x, y] : pairs) {
        auto comm = supercommutator(boson_op(in.pol, sector, x), boson_op(in.pol, sector, y));
        for (const auto& s : states) {
            ++n;
            auto r = comm.apply(s);
            add_term(r, s, g(x, y));
            if (!r.empty())
                wit.push_back({"[ϵ(" + mode_name(loop, x) + "), ϵ(" + mode_name(loop, y) + ")]", render(s, in.c.labels),
                               render(r, in.c.labels)});
        }
    }
    checks.add("heisenberg-law", n, wit);
}

using SuiteFn = void (*)(const RunConfig&, const Instance&, Checks&, Json&);

SuiteFn suite_fn(const std::string& name) {
    if (name == "gamma") return suite_gamma;
    if (name == "square-zero") return suite_square_zero;
    if (name == "commutator") return suite_commutator;
    if (name == "basis-independence") return suite_basis_independence;
    if (name == "uniqueness") return suite_uniqueness;
    if (name == "twisted-action") return suite_twisted_action;
    if (name == "clifford") return suite_clifford;
    if (name == "heisenberg") return suite_heisenberg;
    std::string all;
    for (const auto& s : suite_names()) all += (all.empty() ? "" : ", ") + s;
    throw InputError("unknown suite '" + name + "' (" + all + ")");
}

// ---------------------------------------------------------------------------

Json entry_json(const ChargeEntry& e) {
    Json j{{"charge", e.charge}};
    if (e.sector) j["weight"] = *e.sector;
    j["dim_c"] = e.dim_c;
    j["rank_in"] = e.rank_in;
    j["rank_out"] = e.rank_out;
    j["dim_h"] = e.dim_h;
    return j;
}

Json scan_json(const StabilizationScan& scan) {
    Json rows = Json::array();
    for (const auto& r : scan.rows) {
        Json row{{"cutoff", r.cutoff}, {"closed", r.closed}, {"window_size", r.window_size}};
        if (r.closed) {
            row["euler_c"] = r.report.euler_c;
            row["euler_h"] = r.report.euler_h;
            row["euler_ok"] = r.report.euler_ok();
            row["composition_zero"] = r.report.composition_zero;
            Json pc = Json::array(), ps = Json::array();
            for (const auto& e : r.report.per_charge) pc.push_back(entry_json(e));
            for (const auto& e : r.report.per_sector) ps.push_back(entry_json(e));
            row["per_charge"] = pc;
            row["per_weight"] = ps;
        } else {
            row["status"] = "inconclusive";
        }
        rows.push_back(row);
    }
    Json stab = Json::array();
    for (const auto& [e, ok] : scan.sector_flags.empty() ? scan.charge_flags : scan.sector_flags)
        if (ok) stab.push_back(entry_json(e));
    return Json{{"rows", rows}, {"conclusive", scan.conclusive()}, {"stabilized", stab}};
}

bool scan_consistent(const StabilizationScan& scan) {
    for (const auto& r : scan.rows)
        if (r.closed && (!r.report.euler_ok() || !r.report.composition_zero)) return false;
    return true;
}

using Clock = std::chrono::steady_clock;

void add_timing(const RunConfig& cfg, Outcome& o, Clock::time_point start) {
    if (cfg.timing) o.report["timing_seconds"] = std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

// ---------------------------------------------------------------------------
// Commands

Outcome cmd_algebra_check(const RunConfig& cfg) {
    const auto start = Clock::now();
    check_config(cfg);
    auto af = load_checked_algebra(cfg);
    Outcome o;
    o.report["command"] = "algebra-check";
    o.report["algebra"] = af.alg->name();
    o.report["dim"] = af.alg->dim();
    auto jac = verify_jacobi(*af.alg);
    o.report["jacobi"] = triple_json(jac);
    bool ok = jac.ok;
    if (af.alg->has_form()) {
        auto f = verify_form(*af.alg, af.alg->form());
        o.report["form"] = triple_json(f);
        ok = ok && f.ok;
    }
    std::optional<Grading> grading;
    if (cfg.grading || af.grading) grading = grading_of(cfg, af);
    if (grading) {
        auto g = verify_grading(*af.alg, *grading);
        o.report["grading"] = triple_json(g);
        o.report["grading"]["degrees"] = grading->degrees;
        ok = ok && g.ok;
    }
    o.report["ok"] = ok;
    o.code = ok ? 0 : 1;
    o.summary.push_back("algebra-check " + af.alg->name() + ": " + (ok ? "PASS" : "FAIL"));
    if (!jac.ok) o.summary.push_back("  Jacobi fails at basis triple (" + std::to_string(jac.i) + ", " +
                                     std::to_string(jac.j) + ", " + std::to_string(jac.k) + "): " + jac.detail);
    add_timing(cfg, o, start);
    o.files.emplace_back("algebra-check.json", o.report.dump(2));
    return o;
}

Outcome cmd_admissible(const RunConfig& cfg) {
    const auto start = Clock::now();
    check_config(cfg);
    auto datum = load_datum(cfg);
    const auto& alg = *datum.alg;
    Outcome o;
    auto& r = o.report;
    r["command"] = "admissible";
    r["algebra"] = alg.name();
    r["a"] = datum.a;
    r["e"] = element_json(datum.e);
    bool ok = true;

    if (datum.a == 2) {
        auto gg = is_good_grading(datum);
        Json entries = Json::array();
        for (const auto& e : gg.entries)
            entries.push_back(Json{{"degree", e.degree}, {"dim_source", e.dim_source}, {"dim_target", e.dim_target},
                                   {"rank", e.rank}, {"ok", e.ok}});
        r["good_grading"] = Json{{"e_in_g2", gg.e_in_g2}, {"ok", gg.ok}, {"entries", entries}, {"detail", gg.detail}};
        ok = ok && gg.ok;
    }
    r["criterion_star"] = criterion_star(datum);
    auto complement = window_complement(datum);
    r["complement"] = subspace_json(complement);
    Json wf = Json::array();
    for (const auto& row : window_form(datum, complement).to_dense()) wf.push_back(element_json(row));
    r["window_form"] = wf;
    auto fl = check_form_lemma(datum, complement);
    Json pairings = Json::array();
    for (const auto& p : fl.pairings)
        pairings.push_back(Json{{"degree", p.degree}, {"partner_degree", p.partner_degree}, {"dim", p.dim},
                                {"partner_dim", p.partner_dim}, {"rank", p.rank}, {"ok", p.ok}});
    r["form_lemma"] = Json{{"rank", fl.rank}, {"dim", fl.dim}, {"nondegenerate", fl.nondegenerate},
                           {"symmetric_pairing", fl.symmetric_pairing}, {"pairings", pairings}};
    ok = ok && fl.ok();
    auto de = dim_equality_check(datum, complement);
    r["dim_equality"] = Json{{"dim_complement", de.dim_complement}, {"dim_low", de.dim_low},
                             {"rank_ad_e", de.rank_ad_e}, {"ok", de.ok}};
    ok = ok && de.ok;

    AdmissiblePair pair;
    if (cfg.pair) {
        pair = pair_of(cfg, datum).pair;
        r["pair_source"] = "file";
    } else {
        SubspaceChoice choice{complement, {}};
        if (cfg.isotropic) choice.isotropic = parse_subspace(alg, maybe_file(cfg, *cfg.isotropic));
        auto pc = construct_admissible_pair(datum, choice);
        r["construction"] = Json{{"l", subspace_json(choice.isotropic)},     {"l_perp", subspace_json(pc.l_perp)},
                                 {"n_subalgebra", pc.n_subalgebra},          {"m_ideal", pc.m_ideal},
                                 {"detail", pc.detail}};
        ok = ok && pc.ok();
        pair = pc.pair;
        r["pair_source"] = "isotropic";
    }
    r["m"] = subspace_json(pair.m);
    r["n"] = subspace_json(pair.n);
    auto cond = verify_admissible_pair(datum, pair);
    Json cj = Json::array();
    for (std::size_t i = 0; i < 6; ++i) cj.push_back(cond.conditions[i]);
    r["conditions"] = cj;
    r["condition_notes"] = cond.notes;
    r["dims"] = Json{{"m", cond.dim_m}, {"n", cond.dim_n}, {"rank_ad_e", cond.rank_ad_e}};
    ok = ok && cond.ok();
    const bool strong = strong_admissibility(alg, pair);
    r["strong_admissibility"] = strong;

    if (cfg.search_bound > 0) {
        Json cands = Json::array();
        for (const auto& c : search_isotropic(datum, complement, cfg.search_bound)) {
            Json cc = Json::array();
            for (bool b : c.conditions.conditions) cc.push_back(b);
            cands.push_back(Json{{"l", subspace_json(c.l)}, {"conditions", cc}, {"strong", c.strong}});
        }
        r["search"] = Json{{"bound", cfg.search_bound}, {"candidates", cands}};
    }
    r["ok"] = ok;
    o.code = ok ? 0 : 1;
    std::string cond_str;
    for (bool b : cond.conditions) cond_str += b ? '1' : '0';
    o.summary.push_back("admissible " + alg.name() + ": " + (ok ? "PASS" : "FAIL") + " conditions=" + cond_str +
                        " dims=(" + std::to_string(cond.dim_m) + "," + std::to_string(cond.dim_n) + "," +
                        std::to_string(cond.rank_ad_e) + ") strong=" + (strong ? "yes" : "no"));
    add_timing(cfg, o, start);
    o.files.emplace_back("admissible.json", r.dump(2));
    return o;
}

Outcome cmd_verify(const RunConfig& cfg, const std::string& suite) {
    const auto start = Clock::now();
    check_config(cfg);
    auto fn = suite_fn(suite);
    if (cfg.complex == "compare") throw InputError("verify needs a single complex, not 'compare'");
    auto in = instance_of(cfg, kind_of(cfg.complex));
    Checks checks;
    Json extra = Json::object();
    fn(cfg, in, checks, extra);
    Outcome o;
    o.report["command"] = "verify";
    o.report["suite"] = suite;
    o.report["instance"] = instance_json(cfg, in);
    for (const auto& [k, v] : extra.items()) o.report[k] = v;
    o.report["checked"] = checks.checked;
    o.report["checks"] = checks.list;
    o.report["ok"] = checks.ok;
    o.code = checks.ok ? 0 : 1;
    std::size_t nw = 0;
    for (const auto& c : checks.list) nw += c["witnesses"].size();
    o.summary.push_back("verify " + suite + " [" + kind_name(in.c.kind) + "]: " + (checks.ok ? "PASS" : "FAIL") + " (" +
                        std::to_string(checks.checked) + " checks, " + std::to_string(nw) + " witnesses)");
    for (const auto& c : checks.list)
        if (!c["ok"].get<bool>() && !c["witnesses"].empty())
            o.summary.push_back("  " + c["name"].get<std::string>() + ": " +
                                c["witnesses"][0]["probe"].get<std::string>() + " on " +
                                c["witnesses"][0]["state"].get<std::string>() + " -> " +
                                c["witnesses"][0]["residual"].get<std::string>());
    add_timing(cfg, o, start);
    o.files.emplace_back("verify-" + suite + ".json", o.report.dump(2));
    return o;
}

Outcome cmd_cohomology(const RunConfig& cfg) {
    const auto start = Clock::now();
    check_config(cfg);
    if (cfg.cutoffs.empty()) throw InputError("no cutoffs given");
    std::vector<ComplexKind> kinds;
    if (cfg.complex == "compare") kinds = {ComplexKind::Adjusted, ComplexKind::OrdinaryTwisted};
    else kinds = {kind_of(cfg.complex)};

    Outcome o;
    o.report["command"] = "cohomology";
    o.report["cutoffs"] = cfg.cutoffs;
    o.report["max_bosons"] = cfg.max_bosons;
    o.report["budget"] = cfg.budget;
    bool ok = true;
    std::vector<StabilizationScan> scans;
    Json results = Json::array();
    for (auto kind : kinds) {
        auto in = instance_of(cfg, kind);
        auto sector = weight_sector(in.c);
        auto scan = stabilization_scan(
            [&](int n) { return w_window(in.c, n, cfg.max_bosons, cfg.budget); }, cfg.cutoffs, sector);
        ok = ok && scan_consistent(scan);
        Json res = scan_json(scan);
        res["instance"] = instance_json(cfg, in);
        res["weight_grading"] = static_cast<bool>(sector);
        results.push_back(res);
        o.files.emplace_back("cohomology-" + kind_name(kind) + ".csv", stabilization_csv(scan));
        std::string line = "cohomology " + kind_name(kind) + ":";
        for (const auto& r : scan.rows)
            line += " N=" + std::to_string(r.cutoff) + (r.closed ? "(" + std::to_string(r.window_size) + ")" : "(open)");
        line += scan.conclusive() ? "" : " inconclusive";
        o.summary.push_back(line);
        scans.push_back(std::move(scan));
    }
    o.report["complexes"] = results;
    if (scans.size() == 2) {
        // Stabilized dims of the adjusted and twisted complexes on matched windows.
        Json cmp = Json::array();
        bool agree = true;
        const auto& a = scans[0].sector_flags.empty() ? scans[0].charge_flags : scans[0].sector_flags;
        const auto& b = scans[1].sector_flags.empty() ? scans[1].charge_flags : scans[1].sector_flags;
        for (const auto& [ea, sa] : a)
            for (const auto& [eb, sb] : b)
                if (sa && sb && ea.charge == eb.charge && ea.sector == eb.sector) {
                    const bool same = ea.dim_h == eb.dim_h;
                    agree = agree && same;
                    Json row = entry_json(ea);
                    row["dim_h_twisted"] = eb.dim_h;
                    row["agree"] = same;
                    cmp.push_back(row);
                }
        const bool matched = scans[0].conclusive() && scans[1].conclusive();
        o.report["comparison"] = Json{{"matched", matched}, {"agree", agree}, {"keys", cmp}};
        ok = ok && agree;
        o.summary.push_back(std::string("compare adjusted vs ordinary-twisted: ") +
                            (matched ? (agree ? "agree on " + std::to_string(cmp.size()) + " stabilized keys" : "DISAGREE")
                                     : "inconclusive"));
    }
    o.report["ok"] = ok;
    o.code = ok ? 0 : 1;
    add_timing(cfg, o, start);
    o.files.emplace_back("cohomology.json", o.report.dump(2));
    return o;
}

Outcome cmd_report(const RunConfig& cfg) {
    Outcome total;
    total.report["command"] = "report";
    Json parts = Json::object();
    auto absorb = [&](const std::string& key, Outcome o) {
        parts[key] = Json{{"exit_code", o.code}, {"report", o.report}};
        total.code = std::max(total.code, o.code);
        for (auto& s : o.summary) total.summary.push_back(std::move(s));
    };
    absorb("algebra-check", cmd_algebra_check(cfg));
    absorb("admissible", cmd_admissible(cfg));
    const auto& wanted = cfg.suites.empty() ? suite_names() : cfg.suites;
    for (const auto& s : wanted) {
        try {
            absorb("verify-" + s, cmd_verify(cfg, s));
        } catch (const PreconditionFailure& e) {
            Outcome o;
            o.code = 1;
            o.report = Json{{"refused", e.what()}};
            o.summary.push_back("verify " + s + ": REFUSED " + e.what());
            absorb("verify-" + s, std::move(o));
        }
    }
    absorb("cohomology", cmd_cohomology(cfg));
    total.report["parts"] = parts;
    total.report["exit_code"] = total.code;
    total.files.emplace_back("report.json", total.report.dump(2));
    return total;
}

// ---------------------------------------------------------------------------

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"wcli: exact semi-infinite cohomology toolkit"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    struct Flags {
        std::string config, algebra, polarization, level, beta, complex, pair, isotropic, output_dir, suite;
        std::optional<int> cutoff, max_bosons, samples, max_mode, threads, search_bound, a;
        std::optional<std::size_t> budget;
        std::optional<std::uint64_t> seed;
        std::vector<int> cutoffs;
        bool timing = false;
    } f;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", f.config, "config JSON file");
        sub->add_option("--algebra", f.algebra, "algebra-spec JSON file");
        sub->add_option("--polarization", f.polarization, "sec1 | kw");
        sub->add_option("--level", f.level, "level k as p/q");
        sub->add_option("--beta", f.beta, "beta_e | zero");
        sub->add_option("--a", f.a, "degree of e");
        sub->add_option("--complex", f.complex, "adjusted | ordinary | ordinary-twisted | compare");
        sub->add_option("--pair", f.pair, "admissible pair JSON file");
        sub->add_option("--isotropic", f.isotropic, "isotropic subspace JSON file");
        sub->add_option("--cutoff", f.cutoff, "energy cutoff of the window seed");
        sub->add_option("--cutoffs", f.cutoffs, "cutoffs for the stabilization scan");
        sub->add_option("--max-bosons", f.max_bosons, "boson factors allowed in the seed");
        sub->add_option("--budget", f.budget, "window size budget");
        sub->add_option("--samples", f.samples, "sampled states and probes");
        sub->add_option("--seed", f.seed, "sampling seed");
        sub->add_option("--max-mode", f.max_mode, "probe modes |n| <= max-mode");
        sub->add_option("--threads", f.threads, "thread count (0: OpenMP default)");
        sub->add_option("--output-dir", f.output_dir, "report directory");
        sub->add_flag("--timing", f.timing, "add wall-clock timings to reports");
    };
    auto* c_alg = app.add_subcommand("algebra-check", "Jacobi, form invariance and grading checks");
    auto* c_adm = app.add_subcommand("admissible", "good grading, window form and admissible-pair checks");
    auto* c_ver = app.add_subcommand("verify", "pointwise identity sweeps");
    auto* c_coh = app.add_subcommand("cohomology", "windowed cohomology and stabilization scans");
    auto* c_rep = app.add_subcommand("report", "every command on one configuration");
    for (auto* s : {c_alg, c_adm, c_ver, c_coh, c_rep}) add_common(s);
    c_ver->add_option("--suite", f.suite, "gamma | square-zero | commutator | basis-independence | uniqueness | "
                                          "twisted-action | clifford | heisenberg");
    c_adm->add_option("--search-bound", f.search_bound, "grid bound for an isotropic-line search");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        RunConfig cfg = f.config.empty() ? RunConfig{} : load_config(f.config);
        apply_env(cfg);
        if (!f.algebra.empty()) {
            cfg.algebra = fs::absolute(f.algebra).string();
        }
        if (!f.polarization.empty()) cfg.polarization = f.polarization;
        if (!f.level.empty()) cfg.level = rat_from_json(Json(f.level));
        if (!f.beta.empty()) cfg.beta = f.beta;
        if (f.a) cfg.a = *f.a;
        if (!f.complex.empty()) cfg.complex = f.complex;
        if (!f.pair.empty()) cfg.pair = Json(fs::absolute(f.pair).string());
        if (!f.isotropic.empty()) cfg.isotropic = Json(fs::absolute(f.isotropic).string());
        if (f.cutoff) cfg.cutoff = *f.cutoff;
        if (!f.cutoffs.empty()) cfg.cutoffs = f.cutoffs;
        if (f.max_bosons) cfg.max_bosons = *f.max_bosons;
        if (f.budget) cfg.budget = *f.budget;
        if (f.samples) cfg.samples = *f.samples;
        if (f.seed) cfg.seed = *f.seed;
        if (f.max_mode) cfg.max_mode = *f.max_mode;
        if (f.threads) cfg.threads = *f.threads;
        if (!f.output_dir.empty()) cfg.output_dir = f.output_dir;
        if (f.search_bound) cfg.search_bound = *f.search_bound;
        if (f.timing) cfg.timing = true;
        set_thread_count(cfg.threads);

        Outcome o;
        if (c_alg->parsed()) o = cmd_algebra_check(cfg);
        else if (c_adm->parsed()) o = cmd_admissible(cfg);
        else if (c_ver->parsed()) {
            const std::string suite = f.suite.empty() ? cfg.suite : f.suite;
            if (suite.empty()) throw InputError("verify needs --suite or a 'suite' config key");
            o = cmd_verify(cfg, suite);
        } else if (c_coh->parsed()) o = cmd_cohomology(cfg);
        else o = cmd_report(cfg);

        std::error_code ec;
        fs::create_directories(cfg.output_dir, ec);
        if (ec) throw InputError("cannot create output directory '" + cfg.output_dir + "'");
        for (const auto& [name, text] : o.files) write_text_file((fs::path(cfg.output_dir) / name).string(), text);
        for (const auto& line : o.summary) out << line << "\n";
        return o.code;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << "\n";
        return 2;
    } catch (const PreconditionFailure& e) {
        err << "refused: " << e.what() << "\n";
        return 1;
    } catch (const InvariantViolation& e) {
        err << "internal invariant violated: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace brstkit::cli
