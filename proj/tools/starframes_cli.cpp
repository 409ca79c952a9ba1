#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "starframes/starframes.hpp"

namespace sf = starframes;
using nlohmann::json;

// Exit codes, stable across commands:
//   0 success / pass, 1 usage or parse error, 2 not a frame, 3 verification
//   failure.

namespace {

struct Options {
    double tol_eq = -1.0; // < 0: library default
    bool human = false;
};

sf::Tolerances tolerances(const Options& opt) {
    sf::Tolerances tol;
    if (opt.tol_eq > 0.0) tol.eq = opt.tol_eq;
    return tol;
}

json tol_json(const sf::Tolerances& tol) {
    return json{{"herm", tol.herm}, {"psd", tol.psd}, {"inv", tol.inv}, {"eq", tol.eq}};
}

json context_json(const sf::FrameContext& ctx) {
    return json{{"algebra_dim", ctx.algebra_dim}, {"module_rank", ctx.module_rank}};
}

json make_report(const std::string& command, const json& inputs, const json& results, bool pass,
                 const sf::Tolerances& tol) {
    json rep;
    rep["command"] = command;
    rep["inputs"] = inputs;
    rep["results"] = results;
    rep["pass"] = pass;
    rep["tolerances"] = tol_json(tol);
    return rep;
}

void print_human(const json& j, const std::string& indent) {
    for (const auto& [key, value] : j.items()) {
        if (value.is_object()) {
            std::cout << indent << key << ":\n";
            print_human(value, indent + "  ");
        } else {
            std::cout << indent << key << " = " << value.dump() << "\n";
        }
    }
}

void emit(const json& rep, const Options& opt) {
    if (opt.human)
        print_human(rep, "");
    else
        std::cout << rep.dump(2) << "\n";
}

int cmd_check(const std::string& path, const Options& opt) {
    const sf::Tolerances tol = tolerances(opt);
    const sf::OperatorFrame F = sf::io::load_frame(path);
    const bool frame = sf::is_frame(F, tol);
    const auto [lower, upper] = sf::optimal_scalar_bounds(F);
    const auto [bessel, bessel_bound] = sf::is_bessel(F);
    const double cond = sf::gram_condition(F);

    json results;
    results["context"] = context_json(F.ctx());
    results["n_operators"] = F.size();
    results["is_frame"] = frame;
    results["is_bessel"] = bessel;
    results["optimal_bounds"] = json::array({lower, upper});
    results["bessel_bound"] = bessel_bound;
    results["gram_condition"] = std::isfinite(cond) ? json(cond) : json(nullptr);
    if (!F.label().empty()) results["label"] = F.label();

    emit(make_report("check", json{{path, sf::io::digest_file(path)}}, results, frame, tol), opt);
    return frame ? 0 : 2;
}

int cmd_dual(const std::string& path, const std::string& mode, const std::string& out,
             const Options& opt) {
    const sf::Tolerances tol = tolerances(opt);
    const sf::OperatorFrame F = sf::io::load_frame(path);
    json inputs{{path, sf::io::digest_file(path)}};

    sf::OperatorFrame D = [&]() {
        if (mode == "canonical") return sf::canonical_dual(F, tol);
        if (mode.rfind("bessel:", 0) == 0) {
            const std::string aux = mode.substr(7);
            inputs[aux] = sf::io::digest_file(aux);
            return sf::dual_from_bessel(F, sf::io::load_frame(aux), tol);
        }
        if (mode.rfind("psi:", 0) == 0) {
            const std::string aux = mode.substr(4);
            inputs[aux] = sf::io::digest_file(aux);
            const sf::OperatorFrame P = sf::io::load_frame(aux);
            const sf::SequenceOperator psi(P.ctx(), P.ops());
            return sf::dual_from_right_inverse(F, sf::right_inverse_from_psi(F, psi, tol), tol);
        }
        throw sf::InvalidArgument("unknown --mode: " + mode);
    }();

    const sf::DualPair pair = sf::verify_dual(F, D, tol);
    if (!out.empty()) sf::io::save_frame(out, D);

    json results = sf::io::dual_pair_json(pair);
    results["mode"] = mode;
    if (!out.empty()) results["out"] = out;
    emit(make_report("dual", inputs, results, pair.pass, tol), opt);
    return pair.pass ? 0 : 3;
}

int cmd_verify_dual(const std::string& path, const std::string& dual_path, const Options& opt) {
    const sf::Tolerances tol = tolerances(opt);
    const sf::OperatorFrame F = sf::io::load_frame(path);
    const sf::OperatorFrame D = sf::io::load_frame(dual_path);
    const sf::DualPair pair = sf::verify_dual(F, D, tol);

    json inputs{{path, sf::io::digest_file(path)}, {dual_path, sf::io::digest_file(dual_path)}};
    emit(make_report("verify-dual", inputs, sf::io::dual_pair_json(pair), pair.pass, tol), opt);
    return pair.pass ? 0 : 3;
}

int cmd_tensor(const std::string& left, const std::string& right, const std::string& out,
               const std::vector<std::string>& dual_paths, const Options& opt) {
    const sf::Tolerances tol = tolerances(opt);
    const sf::OperatorFrame F = sf::io::load_frame(left);
    const sf::OperatorFrame G = sf::io::load_frame(right);
    const sf::OperatorFrame T = sf::tensor_frame(F, G);
    json inputs{{left, sf::io::digest_file(left)}, {right, sf::io::digest_file(right)}};

    json results;
    results["product_context"] = context_json(T.ctx());
    results["n_operators"] = T.size();
    if (!out.empty()) {
        sf::io::save_frame(out, T);
        results["out"] = out;
    }

    bool pass = true;
    if (!dual_paths.empty()) {
        const sf::OperatorFrame Fd = sf::io::load_frame(dual_paths[0]);
        const sf::OperatorFrame Gd = sf::io::load_frame(dual_paths[1]);
        inputs[dual_paths[0]] = sf::io::digest_file(dual_paths[0]);
        inputs[dual_paths[1]] = sf::io::digest_file(dual_paths[1]);
        const sf::DualPair pair = sf::verify_tensor_dual(F, Fd, G, Gd, tol);
        results["dual_check"] = sf::io::dual_pair_json(pair);
        pass = pair.pass;
    }

    emit(make_report("tensor", inputs, results, pass, tol), opt);
    return pass ? 0 : 3;
}

int cmd_random(int n, int k, int count, std::uint64_t seed, const std::string& out,
               const std::string& label, const Options& opt) {
    const sf::Tolerances tol = tolerances(opt);
    if (n < 1 || k < 1) throw sf::InvalidArgument("dimensions must be positive");
    if (count < 1) throw sf::InvalidArgument("--count must be positive");
    const sf::OperatorFrame F = sf::random_frame(sf::FrameContext{n, k}, count, seed, label);
    sf::io::save_frame(out, F);

    json results;
    results["context"] = context_json(F.ctx());
    results["n_operators"] = F.size();
    results["seed"] = seed;
    results["out"] = out;
    results["is_frame"] = sf::is_frame(F, tol);
    emit(make_report("random", json{{out, sf::io::digest_file(out)}}, results, true, tol), opt);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"operator-frame toolkit: duals, tensor products, bound checks"};
    app.require_subcommand(1);
    Options opt;

    std::string check_file;
    auto* check = app.add_subcommand("check", "frame/Bessel status and optimal bounds");
    check->add_option("file", check_file, "frame JSON file")->required();
    check->add_option("--tol", opt.tol_eq, "override the equality tolerance");
    check->add_flag("--human", opt.human, "line-oriented output instead of JSON");

    std::string dual_file, dual_mode = "canonical", dual_out;
    auto* dual = app.add_subcommand("dual", "compute a dual frame");
    dual->add_option("file", dual_file, "frame JSON file")->required();
    dual->add_option("--mode", dual_mode, "canonical | bessel:<file> | psi:<file>");
    dual->add_option("--out", dual_out, "write the dual frame here");
    dual->add_option("--tol", opt.tol_eq, "override the equality tolerance");
    dual->add_flag("--human", opt.human, "line-oriented output instead of JSON");

    std::string vd_file, vd_dual;
    auto* vd = app.add_subcommand("verify-dual", "check a claimed dual pair");
    vd->add_option("file", vd_file, "frame JSON file")->required();
    vd->add_option("dualfile", vd_dual, "claimed dual JSON file")->required();
    vd->add_option("--tol", opt.tol_eq, "override the equality tolerance");
    vd->add_flag("--human", opt.human, "line-oriented output instead of JSON");

    std::string t_left, t_right, t_out;
    std::vector<std::string> t_duals;
    auto* tensor = app.add_subcommand("tensor", "tensor product of two frames");
    tensor->add_option("file1", t_left, "left frame JSON file")->required();
    tensor->add_option("file2", t_right, "right frame JSON file")->required();
    tensor->add_option("--out", t_out, "write the tensor frame here");
    tensor->add_option("--verify-duals", t_duals, "dual files for both factors")
        ->expected(2);
    tensor->add_option("--tol", opt.tol_eq, "override the equality tolerance");
    tensor->add_flag("--human", opt.human, "line-oriented output instead of JSON");

    int r_n = 1, r_k = 1, r_count = 1;
    std::uint64_t r_seed = 0;
    std::string r_out, r_label;
    auto* random = app.add_subcommand("random", "generate a seeded random frame");
    random->add_option("--n", r_n, "algebra dimension")->required();
    random->add_option("--k", r_k, "module rank")->required();
    random->add_option("--count", r_count, "number of operators")->required();
    random->add_option("--seed", r_seed, "generator seed")->required();
    random->add_option("--out", r_out, "output frame file")->required();
    random->add_option("--label", r_label, "label stored in the file");
    random->add_option("--tol", opt.tol_eq, "override the equality tolerance");
    random->add_flag("--human", opt.human, "line-oriented output instead of JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*check) return cmd_check(check_file, opt);
        if (*dual) return cmd_dual(dual_file, dual_mode, dual_out, opt);
        if (*vd) return cmd_verify_dual(vd_file, vd_dual, opt);
        if (*tensor) return cmd_tensor(t_left, t_right, t_out, t_duals, opt);
        if (*random) return cmd_random(r_n, r_k, r_count, r_seed, r_out, r_label, opt);
    } catch (const sf::NotAFrame& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const sf::SingularElement& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const sf::NotARightInverse& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const sf::NotADualPair& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const sf::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
