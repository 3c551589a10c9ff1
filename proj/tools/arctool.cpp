// arctool: exact no-three-in-line computations on the torus grid Z_n x Z_n.
//
// Exit codes: 0 success, 1 failed claim or operation, 2 usage or malformed
// input, 3 node budget exhausted (best-so-far still reported).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "arcs/arcs.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitClaim = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw arcs::io_failure("cannot open " + path + " for writing");
    out << text;
    if (!out) throw arcs::io_failure("write to " + path + " failed");
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

arcs::SearchMode pick_verify_mode(int n) {
    int p = n / 2;
    if (n % 2 == 0 && p >= 5 && arcs::is_prime(p)) return arcs::SearchMode::seeded_2p;
    return arcs::SearchMode::generic;
}

int cmd_tau(int n, const std::string& mode, int threads, std::optional<std::uint64_t> budget,
            const std::string& out_path, bool progress) {
    arcs::SearchOptions opts;
    if (mode == "seeded")
        opts.mode = arcs::SearchMode::seeded_2p;
    else if (mode != "generic")
        throw arcs::invalid_mode("unknown mode: " + mode);
    opts.threads = threads;
    opts.node_budget = budget;
    std::mutex log_mu;
    if (progress)
        opts.progress = [&](std::uint64_t nodes, int best) {
            std::lock_guard<std::mutex> lock(log_mu);
            std::cerr << "nodes=" << nodes << " best=" << best << "\n";
        };
    arcs::SearchResult res = arcs::solve(arcs::Modulus(n), opts);
    std::cout << "tau(" << n << ") = " << res.best.size()
              << " proven=" << bool_str(res.proven_optimal) << "\n";
    if (!out_path.empty()) arcs::save_certificate(arcs::certify(res), out_path);
    return res.budget_exhausted ? kExitBudget : kExitOk;
}

int cmd_verify(const std::string& cert_path) {
    arcs::Certificate cert = arcs::load_certificate(cert_path);
    arcs::ArcSet X = arcs::to_arc_set(cert);
    bool arc = arcs::is_arc(X);
    bool complete = arc && arcs::is_complete(X);
    bool ok = true;
    if (cert.claims.arc && *cert.claims.arc != arc) ok = false;
    if (cert.claims.complete && *cert.claims.complete != complete) ok = false;
    std::cout << "arc=" << bool_str(arc) << " complete=" << bool_str(complete);
    // A `maximum: false` claim records that maximality was not established
    // (budget-cut searches), so only a positive claim is re-solved.
    if (cert.claims.maximum && *cert.claims.maximum) {
        arcs::SearchOptions opts;
        opts.mode = pick_verify_mode(cert.n);
        arcs::SearchResult res = arcs::solve(arcs::Modulus(cert.n), opts);
        bool maximum = res.proven_optimal && res.best.size() == X.size() && arc;
        if (!maximum) ok = false;
        std::cout << " maximum=" << bool_str(maximum);
    }
    std::cout << "\n";
    return ok ? kExitOk : kExitClaim;
}

int cmd_normalize(const std::string& cert_path, const std::string& out_path) {
    arcs::Certificate cert = arcs::load_certificate(cert_path);
    arcs::NormalizeResult norm = arcs::normalize_2p(arcs::to_arc_set(cert));
    const arcs::AffineMap& f = norm.map;
    std::cout << "normalized n=" << cert.n << " size=" << norm.image.size() << " map=[["
              << f.m00().value() << "," << f.m01().value() << "],[" << f.m10().value() << ","
              << f.m11().value() << "]]+(" << f.tx().value() << "," << f.ty().value() << ")\n";
    arcs::Certificate out = arcs::from_arc_set(norm.image, cert.claims);
    if (!out_path.empty()) arcs::save_certificate(out, out_path);
    return kExitOk;
}

int cmd_lift(const std::string& cert_path, const std::string& map_name, int p,
             const std::string& out_path) {
    arcs::Certificate cert = arcs::load_certificate(cert_path);
    arcs::ArcSet X = arcs::to_arc_set(cert);
    arcs::ArcSet lifted = [&] {
        if (map_name == "alpha2") return arcs::alpha2_lift(X);
        if (map_name == "alphap") {
            if (p == 0) throw arcs::invalid_mode("--p is required for alphap");
            return arcs::alphap_lift(X, p);
        }
        throw arcs::invalid_mode("unknown lift map: " + map_name);
    }();
    arcs::Claims claims;
    claims.arc = arcs::is_arc(lifted);
    claims.complete = *claims.arc && arcs::is_complete(lifted);
    std::cout << "lifted n=" << lifted.modulus().value() << " size=" << lifted.size() << "\n";
    if (!out_path.empty()) arcs::save_certificate(arcs::from_arc_set(lifted, claims), out_path);
    return kExitOk;
}

int cmd_bounds(int n) {
    arcs::Bounds b = arcs::upper_bounds(arcs::Modulus(n));
    std::cout << b.lower << " <= tau(" << n << ") <= " << b.upper << "\n";
    return kExitOk;
}

int cmd_lines(int n) {
    arcs::LineTable table{arcs::Modulus(n)};
    for (int id = 0; id < table.line_count(); ++id) {
        const arcs::Line& line = table.line(id);
        std::string row;
        for (int c : line.cells) {
            if (!row.empty()) row += ' ';
            row += std::to_string(c % n) + "," + std::to_string(c / n);
        }
        std::cout << row << "\n";
    }
    return kExitOk;
}

int cmd_export_lp(int n, const std::string& out_path) {
    arcs::IlpModel model = arcs::build_model(arcs::Modulus(n));
    if (out_path.empty())
        arcs::write_lp(model, std::cout);
    else
        write_text(out_path, arcs::lp_string(model));
    return kExitOk;
}

int cmd_render(const std::string& cert_path, const std::string& format,
               const std::string& out_path) {
    arcs::Certificate cert = arcs::load_certificate(cert_path);
    arcs::ArcSet X = arcs::to_arc_set(cert);
    std::string drawing;
    if (format == "ascii")
        drawing = arcs::render_ascii(X);
    else if (format == "svg")
        drawing = arcs::render_svg(X);
    else
        throw arcs::invalid_mode("unknown format: " + format);
    if (out_path.empty())
        std::cout << drawing;
    else
        write_text(out_path, drawing);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Exact no-three-in-line toolkit for the torus grid Z_n x Z_n.\n"
        "Coordinates are (x, y) with y increasing upward; renders put the\n"
        "origin at the bottom-left cell."};
    app.require_subcommand(1);

    int n = 0;
    std::string mode = "generic";
    int threads = 1;
    std::uint64_t budget = 0;
    bool has_budget = false;
    std::string out_path, cert_path, map_name = "alpha2", format = "ascii";
    int lift_p = 0;
    bool progress = false;

    auto* tau = app.add_subcommand("tau", "Compute the maximum arc size");
    tau->add_option("--n", n, "modulus")->required()->check(CLI::Range(2, arcs::kMaxModulus));
    tau->add_option("--mode", mode, "generic|seeded")->default_str("generic");
    tau->add_option("--threads", threads, "worker threads")->check(CLI::Range(1, 256));
    tau->add_option("--budget", budget, "node budget")->each([&](const std::string&) {
        has_budget = true;
    });
    tau->add_option("--out", out_path, "certificate output path");
    tau->add_flag("--progress", progress, "log nodes/best to stderr");

    auto* verify = app.add_subcommand("verify", "Check the claims of a certificate");
    verify->add_option("cert", cert_path, "certificate path")->required();

    auto* normalize =
        app.add_subcommand("normalize", "Map an arc of Z_2p^2 onto the seed (0,0),(1,0),(0,1)");
    normalize->add_option("cert", cert_path, "certificate path")->required();
    normalize->add_option("--out", out_path, "normalized certificate path");

    auto* lift = app.add_subcommand("lift", "Lift an arc into Z_2p^2");
    lift->add_option("cert", cert_path, "certificate path")->required();
    lift->add_option("--map", map_name, "alpha2|alphap")->required();
    lift->add_option("--p", lift_p, "target odd prime (alphap only)");
    lift->add_option("--out", out_path, "lifted certificate path");

    auto* bounds = app.add_subcommand("bounds", "Print known bounds on tau");
    bounds->add_option("--n", n, "modulus")->required()->check(CLI::Range(2, arcs::kMaxModulus));

    auto* lines = app.add_subcommand("lines", "Dump every line, one row per line");
    lines->add_option("--n", n, "modulus")->required()->check(CLI::Range(2, arcs::kMaxModulus));

    auto* export_lp = app.add_subcommand("export-lp", "Write the arc ILP in LP format");
    export_lp->add_option("--n", n, "modulus")->required()->check(CLI::Range(2, arcs::kMaxModulus));
    export_lp->add_option("--out", out_path, "output path (default stdout)");

    auto* render = app.add_subcommand("render", "Draw a certificate as a grid");
    render->add_option("cert", cert_path, "certificate path")->required();
    render->add_option("--format", format, "ascii|svg");
    render->add_option("--out", out_path, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (tau->parsed())
            return cmd_tau(n, mode, threads,
                           has_budget ? std::optional<std::uint64_t>(budget) : std::nullopt,
                           out_path, progress);
        if (verify->parsed()) return cmd_verify(cert_path);
        if (normalize->parsed()) return cmd_normalize(cert_path, out_path);
        if (lift->parsed()) return cmd_lift(cert_path, map_name, lift_p, out_path);
        if (bounds->parsed()) return cmd_bounds(n);
        if (lines->parsed()) return cmd_lines(n);
        if (export_lp->parsed()) return cmd_export_lp(n, out_path);
        if (render->parsed()) return cmd_render(cert_path, format, out_path);
    } catch (const arcs::malformed_certificate& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const arcs::io_failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const arcs::invalid_modulus& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const arcs::invalid_mode& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const arcs::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitClaim;
    }
    return kExitUsage;
}
