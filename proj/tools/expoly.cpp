// expoly: batch toolkit for sparse exponential polynomial signals.
//
// Subcommands: synth (model -> sample CSV), reconstruct (samples -> model
// JSON + report), verify (residual checks), stirling (number tables).
// Exit codes: 0 ok, 1 verification failed or internal error, 2 parse,
// 3 coverage, 4 multiplicity bound, 5 clustering, 6 solve.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "expoly/io.hpp"
#include "expoly/stirling.hpp"

namespace {

using namespace expoly;
using nlohmann::json;

struct Box {
    std::vector<int> lo, hi;
    int dim() const { return static_cast<int>(lo.size()); }
};

Box parse_box(const std::string& text) {
    const std::string prefix = "box:";
    if (text.rfind(prefix, 0) != 0)
        throw ParseError("grid must look like box:lo..hi[,lo..hi]");
    Box box;
    std::stringstream body(text.substr(prefix.size()));
    std::string range;
    while (std::getline(body, range, ',')) {
        const std::size_t dots = range.find("..");
        if (dots == std::string::npos)
            throw ParseError("grid range '" + range + "' is not lo..hi");
        try {
            std::size_t pos = 0;
            const std::string lo_s = range.substr(0, dots);
            const std::string hi_s = range.substr(dots + 2);
            const int lo = std::stoi(lo_s, &pos);
            if (pos != lo_s.size()) throw std::invalid_argument(lo_s);
            const int hi = std::stoi(hi_s, &pos);
            if (pos != hi_s.size()) throw std::invalid_argument(hi_s);
            if (hi < lo)
                throw ParseError("grid range '" + range + "' is empty");
            box.lo.push_back(lo);
            box.hi.push_back(hi);
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            throw ParseError("grid range '" + range + "' is not lo..hi");
        }
    }
    if (box.lo.empty()) throw ParseError("grid has no ranges");
    return box;
}

// box points in graded order of the offset from the box origin
std::vector<std::vector<int>> box_points_graded(const Box& box) {
    std::vector<MultiIndex> offsets;
    std::vector<int> cur(box.lo.size(), 0);
    const int s = box.dim();
    while (true) {
        offsets.push_back(MultiIndex(cur));
        int j = s - 1;
        for (; j >= 0; --j) {
            if (cur[static_cast<std::size_t>(j)] <
                box.hi[static_cast<std::size_t>(j)] - box.lo[static_cast<std::size_t>(j)]) {
                ++cur[static_cast<std::size_t>(j)];
                break;
            }
            cur[static_cast<std::size_t>(j)] = 0;
        }
        if (j < 0) break;
    }
    std::sort(offsets.begin(), offsets.end(), GrlexLess{});
    std::vector<std::vector<int>> pts;
    pts.reserve(offsets.size());
    for (const MultiIndex& off : offsets) {
        std::vector<int> p(static_cast<std::size_t>(s));
        for (int j = 0; j < s; ++j)
            p[static_cast<std::size_t>(j)] =
                box.lo[static_cast<std::size_t>(j)] + off[j];
        pts.push_back(std::move(p));
    }
    return pts;
}

void write_text(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(out_path, std::ios::binary);
    if (!os) throw ParseError("cannot open output file '" + out_path + "'");
    os << text;
}

int cmd_synth(const std::string& model_path, const std::string& grid,
              const std::string& out_path) {
    const ExpPolyModel model = load_model(model_path);
    const Box box = parse_box(grid);
    if (box.dim() != model.dim())
        throw ParseError("grid dimension " + std::to_string(box.dim()) +
                         " does not match model dimension " +
                         std::to_string(model.dim()));
    const auto pts = box_points_graded(box);
    std::vector<cplx> values;
    values.reserve(pts.size());
    for (const auto& p : pts) values.push_back(model.eval_grid(p));
    std::ostringstream os;
    write_samples_csv(os, model.dim(), pts, values);
    write_text(out_path, os.str());
    return 0;
}

int cmd_reconstruct(const std::string& samples_path, int mult_bound,
                    const Tolerances& tol, const std::string& out_path) {
    const TableSource src = load_samples(samples_path);
    Report report;
    IdealData ideal;
    const ExpPolyModel fit = end_to_end(src, mult_bound, tol, &report, &ideal);
    const ordered_json j = reconstruction_to_json(fit, ideal, report);
    write_text(out_path, j.dump(2) + "\n");
    return 0;
}

int cmd_verify(const std::string& samples_path, const std::string& model_path,
               double tau_rank, std::ostream& os) {
    const TableSource src = load_samples(samples_path);
    std::ifstream in(model_path);
    if (!in) throw ParseError("cannot open model file '" + model_path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const std::exception& e) {
        throw ParseError("model file '" + model_path + "': " + e.what());
    }
    if (!j.contains("dim")) throw ParseError("model json needs \"dim\"");
    const int dim = j["dim"].get<int>();
    if (dim != src.dim())
        throw ParseError("sample dimension does not match model dimension");

    bool all_pass = true;
    const double kernel_gate = std::max(1e-8, 100.0 * tau_rank);

    if (j.contains("ideal") && j["ideal"].contains("kernel")) {
        const json& kernel = j["ideal"]["kernel"];
        if (kernel.empty()) {
            os << "kernel: empty, nothing to annihilate: PASS\n";
        }
        int idx = 0;
        for (const json& qj : kernel) {
            const Poly q = poly_from_json(qj, dim).to_monomial();
            // every box point whose shifted support stays inside the box
            double worst = 0.0, fmax = 0.0;
            Box box{src.lo(), src.hi()};
            for (const auto& a : box_points_graded(box)) {
                bool fits = !q.is_zero();
                for (const auto& [beta, c] : q.terms())
                    for (int t = 0; t < dim && fits; ++t)
                        if (a[static_cast<std::size_t>(t)] + beta[t] >
                            src.hi()[static_cast<std::size_t>(t)])
                            fits = false;
                if (!fits) continue;
                cplx acc = 0.0;
                for (const auto& [beta, c] : q.terms()) {
                    std::vector<int> p = a;
                    for (int t = 0; t < dim; ++t) p[static_cast<std::size_t>(t)] += beta[t];
                    const cplx fv = src.sample(p);
                    acc += c * fv;
                    fmax = std::max(fmax, std::abs(fv));
                }
                worst = std::max(worst, std::abs(acc));
            }
            const double rel = fmax > 0.0 ? worst / fmax : worst;
            const bool pass = rel <= kernel_gate;
            all_pass = all_pass && pass;
            os << "kernel[" << idx++ << "] annihilation residual = "
               << format_double(rel) << (pass ? ": PASS" : ": FAIL") << "\n";
        }
    }

    if (j.contains("components")) {
        const ExpPolyModel model = model_from_json(j);
        double worst = 0.0, fmax = 0.0;
        Box box{src.lo(), src.hi()};
        for (const auto& a : box_points_graded(box)) {
            const cplx fv = src.sample(a);
            fmax = std::max(fmax, std::abs(fv));
            worst = std::max(worst, std::abs(model.eval_grid(a) - fv));
        }
        const double rel = fmax > 0.0 ? worst / fmax : worst;
        const bool pass = rel <= 1e-8;
        all_pass = all_pass && pass;
        os << "resynthesis residual = " << format_double(rel)
           << (pass ? ": PASS" : ": FAIL") << "\n";
    }
    return all_pass ? 0 : 1;
}

MultiIndex parse_tuple(const std::string& text) {
    std::vector<int> v;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t pos = 0;
            v.push_back(std::stoi(tok, &pos));
            if (pos != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ParseError("malformed multiindex '" + text + "'");
        }
    }
    if (v.empty()) throw ParseError("empty multiindex");
    try {
        return MultiIndex(v);
    } catch (const std::exception& e) {
        throw ParseError(std::string("bad multiindex: ") + e.what());
    }
}

int cmd_stirling(int kind, const std::string& nu_s, const std::string& kappa_s,
                 bool table, int dim, int max_deg, const std::string& out_path) {
    std::ostringstream os;
    if (table) {
        if (dim < 1 || max_deg < 0)
            throw ParseError("stirling --table needs --dim >= 1 and --max >= 0");
        os << "nu,kappa,value\n";
        const IndexSet gamma = total_degree_set(dim, max_deg);
        for (int i = 0; i < gamma.size(); ++i)
            for (int k = 0; k < gamma.size(); ++k) {
                const BigInt v = kind == 2 ? stirling2(gamma[i], gamma[k])
                                           : stirling1(gamma[i], gamma[k]);
                os << '"' << gamma[i].to_string() << "\",\""
                   << gamma[k].to_string() << "\"," << v.str() << "\n";
            }
    } else {
        if (nu_s.empty() || kappa_s.empty())
            throw ParseError("stirling needs --nu and --kappa (or --table)");
        const MultiIndex nu = parse_tuple(nu_s);
        const MultiIndex kappa = parse_tuple(kappa_s);
        if (nu.dim() != kappa.dim())
            throw ParseError("--nu and --kappa must have the same length");
        const BigInt v = kind == 2 ? stirling2(nu, kappa) : stirling1(nu, kappa);
        os << v.str() << "\n";
    }
    write_text(out_path, os.str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse exponential polynomial toolkit"};
    app.require_subcommand(1);

    std::uint64_t seed = kDefaultSeed;
    if (const char* env = std::getenv("EXPOLY_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0') seed = v;
    }

    std::string model_path, samples_path, grid, out_path, nu_s, kappa_s;
    int mult_bound = 1;
    double tau_rank = kRankTolDefault;
    double tau_cluster = kClusterTolDefault;
    int kind = 2, dim = 1, max_deg = 0;
    bool table = false;

    CLI::App* synth = app.add_subcommand("synth", "sample a model on a grid box");
    synth->add_option("--model", model_path, "model JSON file")->required();
    synth->add_option("--grid", grid, "box:lo..hi[,lo..hi]")->required();
    synth->add_option("--out", out_path, "output CSV (default stdout)");

    CLI::App* rec = app.add_subcommand("reconstruct", "recover a model from samples");
    rec->add_option("--samples", samples_path, "sample CSV file")->required();
    rec->add_option("--mult-bound", mult_bound, "multiplicity bound N >= 1")->required();
    rec->add_option("--tol", tau_rank, "rank tolerance");
    rec->add_option("--cluster-tol", tau_cluster, "eigenvalue clustering tolerance");
    rec->add_option("--seed", seed, "joint-eigenvalue seed");
    rec->add_option("--out", out_path, "output JSON (default stdout)");

    CLI::App* ver = app.add_subcommand("verify", "check a model/ideal against samples");
    ver->add_option("--samples", samples_path, "sample CSV file")->required();
    ver->add_option("--model", model_path, "model or reconstruction JSON")->required();
    ver->add_option("--tol", tau_rank, "rank tolerance behind the kernel gate");

    CLI::App* sti = app.add_subcommand("stirling", "stirling numbers of either kind");
    sti->add_option("--kind", kind, "1 or 2")->check(CLI::IsMember({1, 2}));
    sti->add_option("--nu", nu_s, "upper multiindex a,b,...");
    sti->add_option("--kappa", kappa_s, "lower multiindex a,b,...");
    sti->add_flag("--table", table, "dump a CSV table instead");
    sti->add_option("--dim", dim, "table dimension");
    sti->add_option("--max", max_deg, "table max total degree");
    sti->add_option("--out", out_path, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (synth->parsed()) return cmd_synth(model_path, grid, out_path);
        if (rec->parsed()) {
            if (mult_bound < 1) throw ParseError("--mult-bound must be >= 1");
            if (!(tau_rank > 0.0) || !(tau_cluster > 0.0))
                throw ParseError("tolerances must be positive");
            Tolerances tol;
            tol.tau_rank = tau_rank;
            tol.tau_cluster = tau_cluster;
            tol.seed = seed;
            return cmd_reconstruct(samples_path, mult_bound, tol, out_path);
        }
        if (ver->parsed())
            return cmd_verify(samples_path, model_path, tau_rank, std::cout);
        if (sti->parsed())
            return cmd_stirling(kind, nu_s, kappa_s, table, dim, max_deg, out_path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
