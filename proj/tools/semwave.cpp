// semwave: command-line front end for the semantic wave toolkit.
//
// Every subcommand writes its data files plus a manifest.json (resolved
// parameters, seed, versions) into the output directory. Reruns with the same
// config and seed produce byte-identical data files.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <future>
#include <semaphore>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "semwave/embedding.hpp"
#include "semwave/gauge.hpp"
#include "semwave/grid.hpp"
#include "semwave/interference.hpp"
#include "semwave/potential.hpp"
#include "semwave/provider.hpp"
#include "semwave/semantic_state.hpp"
#include "semwave/wave_dynamics.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace semwave;

namespace {

constexpr const char* kVersion = "1.0.0";

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Accepts both TOML (CLI11 native) and JSON config files, sniffed by the
// first non-whitespace byte.
class ConfigAuto : public CLI::Config {
  public:
    std::string to_config(const CLI::App* app, bool default_also, bool write_description,
                          std::string prefix) const override {
        return CLI::ConfigTOML().to_config(app, default_also, write_description, prefix);
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        std::stringstream buf;
        buf << input.rdbuf();
        const std::string text = buf.str();
        const auto first = text.find_first_not_of(" \t\r\n");
        if (first != std::string::npos && text[first] == '{') {
            std::vector<CLI::ConfigItem> items;
            flatten(json::parse(text), {}, items);
            return items;
        }
        std::istringstream again(text);
        return CLI::ConfigTOML().from_config(again);
    }

  private:
    static std::string scalar(const json& v) {
        if (v.is_string()) return v.get<std::string>();
        return v.dump();
    }
    static void flatten(const json& j, std::vector<std::string> parents,
                        std::vector<CLI::ConfigItem>& out) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it->is_object()) {
                auto p = parents;
                p.push_back(it.key());
                flatten(*it, p, out);
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = it.key();
            if (it->is_array())
                for (const auto& v : *it) item.inputs.push_back(scalar(v));
            else
                item.inputs.push_back(scalar(*it));
            out.push_back(item);
        }
    }
};

json options_json(const CLI::App* cmd) {
    json j = json::object();
    for (const auto* opt : cmd->get_options()) {
        std::string name = opt->get_single_name();
        if (name == "help") continue;
        const auto& res = opt->results();
        if (res.empty())
            j[name] = opt->get_default_str();
        else if (res.size() == 1)
            j[name] = res[0];
        else
            j[name] = res;
    }
    return j;
}

void write_manifest(const fs::path& out, const CLI::App* cmd, std::uint64_t seed) {
    json m;
    m["tool"] = "semwave";
    m["subcommand"] = cmd->get_name();
    m["seed"] = seed;
    m["parameters"] = options_json(cmd);
    m["versions"] = {{"semwave", kVersion}, {"snapshot_format", 1}, {"embedding_binary", 1}};
    std::ofstream f(out / "manifest.json");
    if (!f) throw std::runtime_error("cannot write " + (out / "manifest.json").string());
    f << m.dump(2) << "\n";
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << text;
}

EmbeddingFormat format_from_path(const fs::path& path) {
    const auto ext = path.extension().string();
    if (ext == ".jsonl") return EmbeddingFormat::jsonl;
    if (ext == ".csv") return EmbeddingFormat::csv;
    if (ext == ".bin") return EmbeddingFormat::binary;
    throw std::invalid_argument("embedding file extension must be .jsonl, .csv or .bin: " +
                                path.string());
}

struct Common {
    fs::path out = ".";
    std::uint64_t seed = 0;

    void add(CLI::App* cmd) {
        cmd->configurable(); // accept a [subcommand] section in config files
        cmd->add_option("--out", out, "output directory")->capture_default_str();
        cmd->add_option("--seed", seed, "seed for all randomness")->capture_default_str();
    }
    void prepare(const CLI::App* cmd) const {
        fs::create_directories(out);
        write_manifest(out, cmd, seed);
    }
};

// ---------------------------------------------------------------- similarity

struct SimilarityCmd {
    Common common;
    fs::path embeddings;
    std::string a, b;

    void setup(CLI::App& app) {
        auto* cmd = app.add_subcommand("similarity", "cosine similarity between two tokens");
        common.add(cmd);
        cmd->add_option("--embeddings", embeddings, "embedding file (.jsonl/.csv/.bin)")
            ->required();
        cmd->add_option("--a", a, "first token")->required();
        cmd->add_option("--b", b, "second token")->required();
        cmd->callback([this, cmd] { run(cmd); });
    }
    void run(const CLI::App* cmd) {
        common.prepare(cmd);
        auto set = load_embeddings(embeddings, format_from_path(embeddings));
        const double s = cosine_similarity(set.at(a), set.at(b));
        std::cout << num(s) << "\n";
        json j{{"a", a}, {"b", b}, {"s_c", s}};
        write_text(common.out / "similarity.json", j.dump(2) + "\n");
    }
};

// ---------------------------------------------------------------- complexify

struct ComplexifyCmd {
    Common common;
    fs::path embeddings;
    std::string target;
    std::vector<std::string> basis;
    double beta = 1.0, tau = 1.0;
    std::string rule = "softmax";

    void setup(CLI::App& app) {
        auto* cmd = app.add_subcommand("complexify", "build a complex state over a token basis");
        common.add(cmd);
        cmd->add_option("--embeddings", embeddings, "embedding file")->required();
        cmd->add_option("--target", target, "token to complexify")->required();
        cmd->add_option("--basis", basis, "basis tokens")->required()->expected(-1);
        cmd->add_option("--beta", beta, "phase scale")->capture_default_str();
        cmd->add_option("--tau", tau, "softmax temperature")->capture_default_str();
        cmd->add_option("--rule", rule, "magnitude rule")
            ->check(CLI::IsMember({"softmax", "clipped_cosine"}))
            ->capture_default_str();
        cmd->callback([this, cmd] { run(cmd); });
    }
    void run(const CLI::App* cmd) {
        common.prepare(cmd);
        auto set = load_embeddings(embeddings, format_from_path(embeddings));
        const auto mr =
            rule == "softmax" ? MagnitudeRule::softmax : MagnitudeRule::clipped_cosine;
        auto state = complexify(target, basis, set, beta, mr, tau);
        const std::string text = to_json(state);
        std::cout << text << "\n";
        write_text(common.out / "state.json", text + "\n");
    }
};

// ----------------------------------------------------------------- interfere

struct InterfereCmd {
    Common common;
    std::string mode = "wave";
    double a1 = 1.0, a2 = 1.0, phi1 = 0.0, phi2 = 0.0;
    double k1 = 0.0, k2 = 0.0, omega1 = 0.0, omega2 = 0.0, t = 0.0;
    double alpha = 1.0, beta = 1.0;
    fs::path embeddings;
    std::string tok_a, tok_b;
    double x_min = 0.0, x_max = 1.0;
    std::size_t samples = 101;

    void setup(CLI::App& app) {
        auto* cmd = app.add_subcommand("interfere", "two-wave intensity sweep over x");
        common.add(cmd);
        cmd->add_option("--mode", mode, "wave or embedding")
            ->check(CLI::IsMember({"wave", "embedding"}))
            ->capture_default_str();
        cmd->add_option("--a1", a1)->capture_default_str();
        cmd->add_option("--a2", a2)->capture_default_str();
        cmd->add_option("--phi1", phi1)->capture_default_str();
        cmd->add_option("--phi2", phi2)->capture_default_str();
        cmd->add_option("--k1", k1)->capture_default_str();
        cmd->add_option("--k2", k2)->capture_default_str();
        cmd->add_option("--omega1", omega1)->capture_default_str();
        cmd->add_option("--omega2", omega2)->capture_default_str();
        cmd->add_option("--t", t, "evaluation time")->capture_default_str();
        cmd->add_option("--alpha", alpha, "embedding mode: position scale")->capture_default_str();
        cmd->add_option("--beta", beta, "embedding mode: phase scale")->capture_default_str();
        cmd->add_option("--embeddings", embeddings, "embedding file (embedding mode)");
        cmd->add_option("--tok-a", tok_a, "first token (embedding mode)");
        cmd->add_option("--tok-b", tok_b, "second token (embedding mode)");
        cmd->add_option("--x-min", x_min)->capture_default_str();
        cmd->add_option("--x-max", x_max)->capture_default_str();
        cmd->add_option("--samples", samples)->capture_default_str();
        cmd->callback([this, cmd] { run(cmd); });
    }
    void run(const CLI::App* cmd) {
        common.prepare(cmd);
        if (samples < 2) throw std::invalid_argument("interfere: samples must be >= 2");
        std::string csv = "x_index,total,direct1,direct2,interference\n";

        EmbeddingVector va, vb;
        std::vector<double> dir; // embedding mode sweep direction: unit (va - vb)
        if (mode == "embedding") {
            if (embeddings.empty() || tok_a.empty() || tok_b.empty())
                throw std::invalid_argument(
                    "interfere: embedding mode needs --embeddings, --tok-a and --tok-b");
            auto set = load_embeddings(embeddings, format_from_path(embeddings));
            va = set.at(tok_a);
            vb = set.at(tok_b);
            dir.resize(va.dim());
            double n2 = 0.0;
            for (std::size_t i = 0; i < va.dim(); ++i) {
                dir[i] = va.values[i] - vb.values[i];
                n2 += dir[i] * dir[i];
            }
            if (n2 > 0.0)
                for (auto& d : dir) d /= std::sqrt(n2);
        }

        for (std::size_t i = 0; i < samples; ++i) {
            const double x = x_min + (x_max - x_min) * static_cast<double>(i) /
                                         static_cast<double>(samples - 1);
            InterferenceResult r;
            if (mode == "wave") {
                PlaneWave w1{a1, phi1, {k1}, omega1};
                PlaneWave w2{a2, phi2, {k2}, omega2};
                r = two_wave_intensity(w1, w2, {x}, t);
            } else {
                std::vector<double> pos(dir.size());
                for (std::size_t d = 0; d < dir.size(); ++d) pos[d] = x * dir[d];
                r = embedding_interference(va, vb, a1, a2, alpha, beta, pos);
            }
            csv += std::to_string(i) + "," + num(r.total) + "," + num(r.direct1) + "," +
                   num(r.direct2) + "," + num(r.interference) + "\n";
        }
        write_text(common.out / "interference.csv", csv);
    }
};

// -------------------------------------------------------------------- evolve

struct GridOpts {
    double x_min = -20.0, x_max = 20.0;
    std::size_t nx = 512;
    double y_min = 0.0, y_max = 0.0;
    std::size_t ny = 0;

    void add(CLI::App* cmd) {
        cmd->add_option("--x-min", x_min)->capture_default_str();
        cmd->add_option("--x-max", x_max)->capture_default_str();
        cmd->add_option("--nx", nx)->capture_default_str();
        cmd->add_option("--y-min", y_min)->capture_default_str();
        cmd->add_option("--y-max", y_max)->capture_default_str();
        cmd->add_option("--ny", ny, "nonzero enables a second axis")->capture_default_str();
    }
    GridSpec build() const {
        GridSpec g{{Axis{x_min, x_max, nx}}};
        if (ny > 0) g.axes.push_back(Axis{y_min, y_max, ny});
        g.validate();
        return g;
    }
};

struct InitOpts {
    std::string init = "gaussian";
    double sigma = 1.0, center = 0.0, k0 = 0.0, amp = 1.0;
    bool no_normalize = false;
    fs::path init_file;

    void add(CLI::App* cmd) {
        cmd->add_option("--init", init, "gaussian, soliton or file")
            ->check(CLI::IsMember({"gaussian", "soliton", "file"}))
            ->capture_default_str();
        cmd->add_option("--sigma", sigma, "gaussian width")->capture_default_str();
        cmd->add_option("--center", center)->capture_default_str();
        cmd->add_option("--k0", k0, "momentum kick along x")->capture_default_str();
        cmd->add_option("--amp", amp, "soliton amplitude")->capture_default_str();
        cmd->add_flag("--no-normalize", no_normalize, "skip unit-norm rescaling (gaussian)");
        cmd->add_option("--init-file", init_file, "snapshot base path for --init file");
    }
    WaveField build(const GridSpec& grid) const {
        if (init == "file") {
            if (init_file.empty())
                throw std::invalid_argument("evolve: --init file requires --init-file");
            auto f = load_field(init_file);
            if (!(f.grid == grid))
                throw std::invalid_argument("evolve: snapshot grid does not match --nx/--x-min");
            return f;
        }
        WaveField f;
        f.grid = grid;
        f.samples.resize(grid.size());
        const auto& ax = grid.axes[0];
        const std::size_t ny = grid.dims() > 1 ? grid.axes[1].n : 1;
        for (std::size_t i = 0; i < ax.n; ++i) {
            for (std::size_t j = 0; j < ny; ++j) {
                const double x = ax.coord(i) - center;
                double r2 = x * x;
                if (grid.dims() > 1) {
                    const double y = grid.axes[1].coord(j);
                    r2 += y * y;
                }
                std::complex<double> v;
                if (init == "soliton")
                    v = amp / std::cosh(amp * std::sqrt(r2));
                else
                    v = std::exp(-r2 / (4.0 * sigma * sigma));
                v *= std::polar(1.0, k0 * (x + center));
                f.samples[i * ny + j] = v;
            }
        }
        if (init == "gaussian" && !no_normalize) {
            const double nrm = std::sqrt(f.norm());
            for (auto& z : f.samples) z /= nrm;
        }
        return f;
    }
};

struct PotentialOpts {
    std::string potential = "none";
    double omega = 1.0, c = 1.0, v = 1.0;

    void add(CLI::App* cmd) {
        cmd->add_option("--potential", potential, "none, harmonic or double-well")
            ->check(CLI::IsMember({"none", "harmonic", "double-well"}))
            ->capture_default_str();
        cmd->add_option("--pot-omega", omega, "harmonic frequency")->capture_default_str();
        cmd->add_option("--c", c, "double-well stiffness")->capture_default_str();
        cmd->add_option("--v", v, "double-well minimum position")->capture_default_str();
    }
    std::optional<std::vector<double>> build(const GridSpec& grid) const {
        if (potential == "none") return std::nullopt;
        std::vector<double> out(grid.size());
        const std::size_t ny = grid.dims() > 1 ? grid.axes[1].n : 1;
        DoubleWellParams dw{c, v};
        for (std::size_t i = 0; i < grid.axes[0].n; ++i)
            for (std::size_t j = 0; j < ny; ++j) {
                double val = 0.0;
                for (std::size_t ax = 0; ax < grid.dims(); ++ax) {
                    const double q = grid.axes[ax].coord(ax == 0 ? i : j);
                    val += potential == "harmonic" ? 0.5 * omega * omega * q * q
                                                   : double_well_eval(dw, q);
                }
                out[i * ny + j] = val;
            }
        return out;
    }
};

std::string series_csv(const ObservableSeries& series, bool two_d, bool occupancy) {
    std::string csv = "time,norm,energy,mean_x";
    if (two_d) csv += ",mean_y";
    if (occupancy) csv += ",p_left,p_right";
    csv += "\n";
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        csv += num(series.times[i]) + "," + num(series.norm[i]) + "," + num(series.energy[i]) +
               "," + num(series.mean_position[0][i]);
        if (two_d) csv += "," + num(series.mean_position[1][i]);
        if (occupancy) csv += "," + num(series.p_left[i]) + "," + num(series.p_right[i]);
        csv += "\n";
    }
    return csv;
}

struct EvolveCmd {
    Common common;
    GridOpts grid;
    InitOpts init;
    PotentialOpts pot;
    double dt = 1e-3, gamma = 0.0;
    std::size_t steps = 1000, record_every = 100;
    double split = 0.0;
    bool use_split = false;

    void setup(CLI::App& app) {
        auto* cmd = app.add_subcommand("evolve", "split-step evolution with observables");
        common.add(cmd);
        grid.add(cmd);
        init.add(cmd);
        pot.add(cmd);
        cmd->add_option("--dt", dt)->capture_default_str();
        cmd->add_option("--steps", steps)->capture_default_str();
        cmd->add_option("--gamma", gamma, "cubic coupling")->capture_default_str();
        cmd->add_option("--record-every", record_every)->capture_default_str();
        cmd->add_option("--split", split, "record well occupancies about this x")
            ->capture_default_str();
        cmd->add_flag("--occupancy", use_split, "enable occupancy recording");
        cmd->callback([this, cmd] { run(cmd); });
    }
    void run(const CLI::App* cmd) {
        common.prepare(cmd);
        auto g = grid.build();
        auto field = init.build(g);

        EvolutionConfig cfg;
        cfg.dt = dt;
        cfg.steps = steps;
        cfg.gamma = gamma;
        cfg.record_every = record_every;
        cfg.potential = pot.build(g);
        if (use_split) cfg.occupancy_split = split;

        auto [out, series] = evolve(field, cfg);
        write_text(common.out / "series.csv", series_csv(series, g.dims() > 1, use_split));
        save_field(out, common.out / "final");
        auto report = charge_conservation_report(series, 1e-6);
        json j{{"max_relative_drift", report.max_relative_drift},
               {"charge_conserved", report.conserved}};
        write_text(common.out / "conservation.json", j.dump(2) + "\n");
    }
};

// -------------------------------------------------------------------- tunnel

struct TunnelCmd {
    Common common;
    double c = 1.0, v = 1.5;
    double x_min = -6.0, x_max = 6.0;
    std::size_t nx = 512;
    double dt = 1e-3;
    std::size_t pot_samples = 256;

    void setup(CLI::App& app) {
        auto* cmd = app.add_subcommand("tunnel", "double-well tunneling period cross-check");
        common.add(cmd);
        cmd->add_option("--c", c, "well stiffness")->capture_default_str();
        cmd->add_option("--v", v, "well minimum position")->capture_default_str();
        cmd->add_option("--x-min", x_min)->capture_default_str();
        cmd->add_option("--x-max", x_max)->capture_default_str();
        cmd->add_option("--nx", nx)->capture_default_str();
        cmd->add_option("--dt", dt)->capture_default_str();
        cmd->add_option("--pot-samples", pot_samples, "rows in potential.csv")
            ->capture_default_str();
        cmd->callback([this, cmd] { run(cmd); });
    }
    void run(const CLI::App* cmd) {
        common.prepare(cmd);
        DoubleWellParams dw{c, v};
        auto res = tunneling_period(dw, GridSpec{{Axis{x_min, x_max, nx}}}, dt);
        json j{{"measured", res.measured},
               {"spectral", res.spectral},
               {"e0", res.e0},
               {"e1", res.e1},
               {"barrier", res.barrier},
               {"relative_gap", std::abs(res.measured - res.spectral) / res.spectral}};
        write_text(common.out / "tunnel.json", j.dump(2) + "\n");
        std::cout << "measured " << num(res.measured) << " spectral " << num(res.spectral)
                  << "\n";

        auto pg = sample_grid(PotentialKind::double_well, &dw, nullptr, x_min, x_max,
                              pot_samples);
        std::string csv = "x,V(x)\n";
        for (std::size_t i = 0; i < pg.xs.size(); ++i)
            csv += num(pg.xs[i]) + "," + num(pg.values[i]) + "\n";
        write_text(common.out / "potential.csv", csv);
    }
};

// -------------------------------------------------------------------- greens

struct GreensCmd {
    Common common;
    unsigned dim = 3;
    std::string sign = "standard";
    double r = 0.0;
    double r_min = 0.1, r_max = 2.0;
    std::size_t samples = 64;

    void setup(CLI::App& app) {
        auto* cmd = app.add_subcommand("greens", "N-dimensional Laplacian Green's function");
        common.add(cmd);
        cmd->add_option("--dim", dim)->capture_default_str();
        cmd->add_option("--sign", sign)->check(CLI::IsMember({"standard", "flipped"}))
            ->capture_default_str();
        cmd->add_option("--r", r, "single separation; 0 sweeps [--r-min, --r-max]")
            ->capture_default_str();
        cmd->add_option("--r-min", r_min)->capture_default_str();
        cmd->add_option("--r-max", r_max)->capture_default_str();
        cmd->add_option("--samples", samples)->capture_default_str();
        cmd->callback([this, cmd] { run(cmd); });
    }
    void run(const CLI::App* cmd) {
        common.prepare(cmd);
        GreensSpec spec{dim, sign == "standard" ? GreensSign::standard : GreensSign::flipped};
        if (r > 0.0) {
            const double g = greens_function(spec, r);
            std::cout << num(g) << "\n";
            json j{{"dim", dim}, {"sign", sign}, {"r", r}, {"g", g}};
            write_text(common.out / "greens.json", j.dump(2) + "\n");
            return;
        }
        if (samples < 2) throw std::invalid_argument("greens: samples must be >= 2");
        std::string csv = "r,G\n";
        for (std::size_t i = 0; i < samples; ++i) {
            const double ri = r_min + (r_max - r_min) * static_cast<double>(i) /
                                          static_cast<double>(samples - 1);
            csv += num(ri) + "," + num(greens_function(spec, ri)) + "\n";
        }
        write_text(common.out / "greens.csv", csv);
    }
};

// -------------------------------------------------------------------- action

json breakdown_json(const ActionBreakdown& b) {
    json terms = json::object();
    auto put = [&](const char* name, const std::optional<double>& v) {
        terms[name] = v ? json(*v) : json(nullptr);
    };
    put("time_kinetic", b.time_kinetic);
    put("gradient", b.gradient);
    put("scalar_coupling", b.scalar_coupling);
    put("current_interaction", b.current_interaction);
    put("density_interaction", b.density_interaction);
    put("field_strength", b.field_strength);
    put("nonlinear", b.nonlinear);
    put("coulomb_nonlocal", b.coulomb_nonlocal);
    return json{{"terms", terms}, {"total", b.total}};
}

struct ActionCmd {
    Common common;
    GridOpts grid;
    InitOpts init;
    PotentialOpts pot;
    double dt = 1e-3, gamma = 0.0;
    std::size_t steps = 100, record_every = 10;
    std::string nonlinear = "none";
    double mu2 = 1.0, lambda = 0.25;
    bool include_nonlocal = false, solve_a0 = false;
    std::string greens_sign = "standard";

    void setup(CLI::App& app) {
        auto* cmd = app.add_subcommand("action", "per-term action breakdown on a trajectory");
        common.add(cmd);
        grid.add(cmd);
        init.add(cmd);
        pot.add(cmd);
        cmd->add_option("--dt", dt)->capture_default_str();
        cmd->add_option("--steps", steps)->capture_default_str();
        cmd->add_option("--gamma", gamma, "cubic coupling (evolution and cubic term)")
            ->capture_default_str();
        cmd->add_option("--record-every", record_every, "steps between snapshots")
            ->capture_default_str();
        cmd->add_option("--nonlinear", nonlinear, "none, cubic or mexican-hat")
            ->check(CLI::IsMember({"none", "cubic", "mexican-hat"}))
            ->capture_default_str();
        cmd->add_option("--mu2", mu2)->capture_default_str();
        cmd->add_option("--lambda", lambda)->capture_default_str();
        cmd->add_flag("--include-nonlocal", include_nonlocal, "add the pairwise Coulomb term");
        cmd->add_flag("--solve-a0", solve_a0, "solve -lap A0 = |psi|^2 from the initial density");
        cmd->add_option("--greens-sign", greens_sign)
            ->check(CLI::IsMember({"standard", "flipped"}))
            ->capture_default_str();
        cmd->callback([this, cmd] { run(cmd); });
    }
    void run(const CLI::App* cmd) {
        common.prepare(cmd);
        if (record_every == 0 || steps % record_every != 0)
            throw std::invalid_argument("action: --record-every must divide --steps");
        auto g = grid.build();
        auto field = init.build(g);
        field.time = 0.0;

        std::vector<WaveField> traj{field};
        EvolutionConfig cfg;
        cfg.dt = dt;
        cfg.steps = record_every;
        cfg.gamma = gamma;
        cfg.record_every = record_every;
        cfg.potential = pot.build(g);
        for (std::size_t done = 0; done < steps; done += record_every) {
            auto [next, series] = evolve(traj.back(), cfg);
            next.time = dt * static_cast<double>(done + record_every);
            traj.push_back(std::move(next));
        }

        GreensSpec spec{static_cast<unsigned>(g.dims()),
                        greens_sign == "standard" ? GreensSign::standard : GreensSign::flipped};
        NonlinearSpec nl;
        if (nonlinear == "cubic") {
            nl.kind = NonlinearKind::cubic;
            nl.gamma = gamma;
        } else if (nonlinear == "mexican-hat") {
            nl.kind = NonlinearKind::mexican_hat;
            nl.mh = MexicanHatParams{mu2, lambda};
        }

        RealField a0;
        if (solve_a0) {
            RealField rho;
            rho.grid = g;
            rho.values.resize(g.size());
            for (std::size_t i = 0; i < g.size(); ++i)
                rho.values[i] = std::norm(traj.front().samples[i]);
            a0 = solve_scalar_potential(rho, spec);
            WaveField a0_field;
            a0_field.grid = g;
            a0_field.samples.assign(a0.values.begin(), a0.values.end());
            save_field(a0_field, common.out / "a0");
        }

        auto act = effective_action(traj, solve_a0 ? &a0 : nullptr, nullptr, nl, spec,
                                    include_nonlocal);
        json j = breakdown_json(act.accumulated);
        j["total"] = act.total;
        j["snapshots"] = traj.size();
        write_text(common.out / "action.json", j.dump(2) + "\n");
        std::cout << "action " << num(act.total) << "\n";

        if (nonlinear == "mexican-hat") {
            auto vac = break_symmetry(nl.mh, common.seed);
            json vj{{"magnitude", vac.magnitude},
                    {"theta", vac.theta},
                    {"stated_magnitude", stated_vacuum_magnitude(nl.mh)}};
            write_text(common.out / "vacuum.json", vj.dump(2) + "\n");
        }
    }
};

// ---------------------------------------------------------------------- scan

struct ScanCmd {
    Common common;
    fs::path embeddings;
    std::string target_a, target_b, alphabet;
    std::size_t max_len = 2, cap = 500000, top = 50;

    void setup(CLI::App& app) {
        auto* cmd = app.add_subcommand("scan", "enumerate tokens equidistant to two targets");
        common.add(cmd);
        cmd->add_option("--embeddings", embeddings, "embedding file")->required();
        cmd->add_option("--target-a", target_a)->required();
        cmd->add_option("--target-b", target_b)->required();
        cmd->add_option("--alphabet", alphabet)->required();
        cmd->add_option("--max-len", max_len)->capture_default_str();
        cmd->add_option("--cap", cap, "candidate enumeration cap")->capture_default_str();
        cmd->add_option("--top", top, "rows written to scan.csv")->capture_default_str();
        cmd->callback([this, cmd] { run(cmd); });
    }
    void run(const CLI::App* cmd) {
        common.prepare(cmd);
        auto set = load_embeddings(embeddings, format_from_path(embeddings));
        auto result = scan_balanced_tokens(lookup_from(set), target_a, target_b, alphabet,
                                           max_len, cap);
        std::string csv = "rank,candidate,delta\n";
        for (std::size_t i = 0; i < result.ranked.size() && i < top; ++i)
            csv += std::to_string(i) + "," + result.ranked[i].candidate + "," +
                   num(result.ranked[i].delta) + "\n";
        write_text(common.out / "scan.csv", csv);

        json best = json::array();
        for (const auto& e : result.best_per_length)
            best.push_back({{"candidate", e.candidate}, {"delta", e.delta}});
        write_text(common.out / "scan.json", json{{"best_per_length", best}}.dump(2) + "\n");
        if (!result.ranked.empty())
            std::cout << result.ranked.front().candidate << " "
                      << num(result.ranked.front().delta) << "\n";
    }
};

// --------------------------------------------------------------------- fetch

struct FetchCmd {
    Common common;
    ProviderConfig provider;
    std::vector<std::string> tokens;
    std::string save_as = "embeddings.jsonl";

    void setup(CLI::App& app) {
        auto* cmd = app.add_subcommand("fetch", "fetch embeddings from an HTTP provider");
        common.add(cmd);
        cmd->add_option("--endpoint", provider.endpoint)->required();
        cmd->add_option("--model", provider.model)->required();
        cmd->add_option("--credential-env", provider.credential_env,
                        "env var holding the bearer token");
        cmd->add_option("--cache-dir", provider.cache_dir);
        cmd->add_option("--batch-size", provider.batch_size)->capture_default_str();
        cmd->add_option("--max-in-flight", provider.max_in_flight)->capture_default_str();
        cmd->add_option("--max-retries", provider.max_retries)->capture_default_str();
        cmd->add_option("--save-as", save_as, "output embedding file name")
            ->capture_default_str();
        cmd->add_option("tokens", tokens, "tokens to embed")->required()->expected(-1);
        cmd->callback([this, cmd] { run(cmd); });
    }
    void run(const CLI::App* cmd) {
        common.prepare(cmd);
        FetchStats stats;
        auto set = fetch_embeddings(provider, tokens, &stats);
        const fs::path out_file = common.out / save_as;
        save_embeddings(set, out_file, format_from_path(out_file));
        json j{{"tokens", set.size()},
               {"requests", stats.requests},
               {"cache_hits", stats.cache_hits}};
        write_text(common.out / "fetch.json", j.dump(2) + "\n");
    }
};

// -------------------------------------------------------------------- driver

int run_single(const std::vector<std::string>& args);

// Batch mode: repeated --config runs each config as an independent job, at
// most --jobs at a time. Each config must set its own output directory.
int run_batch(std::vector<std::string> args, const std::vector<std::string>& configs,
              std::size_t jobs) {
    std::vector<std::future<int>> futs;
    std::counting_semaphore<> gate(static_cast<std::ptrdiff_t>(std::max<std::size_t>(jobs, 1)));
    for (const auto& cfg : configs) {
        futs.push_back(std::async(std::launch::async, [&, cfg] {
            gate.acquire();
            struct Release {
                std::counting_semaphore<>& g;
                ~Release() { g.release(); }
            } release{gate};
            auto child = args;
            child.insert(child.begin(), {"--config", cfg});
            return run_single(child);
        }));
    }
    int worst = 0;
    for (auto& f : futs) worst = std::max(worst, f.get());
    return worst;
}

int run_single(const std::vector<std::string>& args) {
    CLI::App app{"semantic wave toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML or JSON config file; flags override")
        ->transform(CLI::ExistingFile);
    app.config_formatter(std::make_shared<ConfigAuto>());

    SimilarityCmd similarity;
    ComplexifyCmd complexify_cmd;
    InterfereCmd interfere;
    EvolveCmd evolve_cmd;
    TunnelCmd tunnel;
    GreensCmd greens;
    ActionCmd action;
    ScanCmd scan;
    FetchCmd fetch;
    similarity.setup(app);
    complexify_cmd.setup(app);
    interfere.setup(app);
    evolve_cmd.setup(app);
    tunnel.setup(app);
    greens.setup(app);
    action.setup(app);
    scan.setup(app);
    fetch.setup(app);

    // CLI11 wants argv-style reversed vectors
    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "semwave: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "semwave: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);

    // Extract batch controls before the regular parse.
    std::vector<std::string> configs;
    std::size_t jobs = 1;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            configs.push_back(args[++i]);
        } else if (args[i].rfind("--config=", 0) == 0) {
            configs.push_back(args[i].substr(9));
        } else if (args[i] == "--jobs" && i + 1 < args.size()) {
            jobs = static_cast<std::size_t>(std::stoul(args[++i]));
        } else if (args[i].rfind("--jobs=", 0) == 0) {
            jobs = static_cast<std::size_t>(std::stoul(args[i].substr(7)));
        } else {
            rest.push_back(args[i]);
        }
    }
    if (configs.size() > 1) return run_batch(rest, configs, jobs);
    if (configs.size() == 1)
        rest.insert(rest.begin(), {"--config", configs[0]});
    return run_single(rest);
}
