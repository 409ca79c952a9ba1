// Acceptance suite: seven criteria, one PASS/FAIL line each, exit code equal
// to the number of failed criteria. Criterion 7 drives the installed CLI,
// found through the STARFRAMES_CLI environment variable.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "starframes/starframes.hpp"

namespace sf = starframes;
using Mat = Eigen::MatrixXcd;

namespace {

double frame_diff(const sf::OperatorFrame& A, const sf::OperatorFrame& B) {
    double m = 0.0;
    for (int i = 0; i < A.size(); ++i)
        m = std::max(m, (A.op(i).mat() - B.op(i).mat()).cwiseAbs().maxCoeff());
    return m;
}

// n=1, k=2, ops {I, diag(1,0), [[0,1],[0,0]]}: G = diag(3,1).
sf::OperatorFrame hand_frame() {
    const sf::FrameContext ctx{1, 2};
    Mat m1 = Mat::Identity(2, 2);
    Mat m2 = Mat::Zero(2, 2);
    m2(0, 0) = 1.0;
    Mat m3 = Mat::Zero(2, 2);
    m3(0, 1) = 1.0;
    return sf::OperatorFrame({sf::ModuleOperator(ctx, m1), sf::ModuleOperator(ctx, m2),
                              sf::ModuleOperator(ctx, m3)});
}

sf::OperatorFrame parseval_singleton(const sf::FrameContext& ctx, std::uint64_t seed) {
    sf::Rng rng(seed);
    const Mat a = rng.matrix(ctx.flat_dim(), ctx.flat_dim());
    const Eigen::HouseholderQR<Mat> qr(a);
    const Mat q = qr.householderQ();
    return sf::OperatorFrame({sf::ModuleOperator(ctx, q)});
}

struct Check {
    bool ok = true;
    std::string detail;

    void fail(const std::string& msg) {
        if (ok) detail = msg;
        ok = false;
    }
    void require(bool cond, const std::string& msg) {
        if (!cond) fail(msg);
    }
};

// 1. Canonical-dual reconstruction over (n,k,N) in {1,2,3}x{1,2,3}x{1..5},
//    five seeds each: residual <= 1e-9*nk, 100-vector reconstruction <= 1e-9.
Check criterion1() {
    Check c;
    int tested = 0, skipped = 0;
    double worst_residual = 0.0, worst_recon = 0.0;

    for (int n = 1; n <= 3; ++n)
        for (int k = 1; k <= 3; ++k)
            for (int N = 1; N <= 5; ++N)
                for (int s = 0; s < 5; ++s) {
                    const std::uint64_t seed = 100000u + static_cast<std::uint64_t>(
                                                             n * 1000 + k * 100 + N * 10 + s);
                    const sf::FrameContext ctx{n, k};
                    const auto F = sf::random_frame(ctx, N, seed);
                    if (!sf::is_frame(F)) {
                        ++skipped;
                        continue;
                    }
                    ++tested;
                    const int d = ctx.flat_dim();
                    const auto pair = sf::verify_dual(F, sf::canonical_dual(F));
                    worst_residual = std::max(worst_residual, pair.residual);
                    if (pair.residual > 1e-9 * d) {
                        std::ostringstream os;
                        os << "residual " << pair.residual << " > 1e-9*" << d << " at (n,k,N,seed)=("
                           << n << "," << k << "," << N << "," << seed << ")";
                        c.fail(os.str());
                    }

                    const Mat recon = sf::detail::synthesis_product(F.ops(), pair.dual.ops());
                    sf::Rng rng(seed + 7777);
                    for (int v = 0; v < 100; ++v) {
                        const auto x = sf::random_module_vector(ctx, rng);
                        const double nx = x.flat().norm();
                        const double err = (x.flat() * recon - x.flat()).norm() / nx;
                        worst_recon = std::max(worst_recon, err);
                        if (err > 1e-9) {
                            std::ostringstream os;
                            os << "reconstruction error " << err << " > 1e-9 at (n,k,N,seed)=("
                               << n << "," << k << "," << N << "," << seed << ")";
                            c.fail(os.str());
                        }
                    }
                }

    if (c.ok) {
        std::ostringstream os;
        os << tested << " frames, " << skipped << " skipped as non-frames, worst residual "
           << worst_residual << ", worst reconstruction " << worst_recon;
        c.detail = os.str();
    }
    return c;
}

// 2. The six-part dual parametrization suite.
Check criterion2() {
    Check c;
    const std::vector<std::pair<sf::FrameContext, int>> shapes{
        {{1, 2}, 3}, {{2, 1} , 4}, {{2, 2}, 3}, {{3, 1}, 2}};

    std::uint64_t seed = 200000;
    for (const auto& [ctx, N] : shapes) {
        const auto F = sf::random_frame(ctx, N, ++seed);
        if (!sf::is_frame(F)) {
            c.fail("generated instance unexpectedly fails is_frame");
            continue;
        }
        const auto canon = sf::canonical_dual(F);
        const auto delta = sf::random_frame(ctx, N, ++seed); // recorded seed
        const auto omega = sf::dual_from_bessel(F, delta);

        // (1) theta^* eta = I for every constructed dual pair
        for (const auto* D : {&canon, &omega})
            c.require(sf::theta_eta_identity(F, *D) <= 1e-10, "theta^* eta deviates beyond 1e-10");

        // (2) Omega_i = pi_i eta, exactly
        const auto from_eta = sf::dual_from_right_inverse(F, sf::analysis(omega));
        c.require(frame_diff(from_eta, omega) == 0.0, "pi_i eta differs from Omega_i");

        // (3) right inverses are accepted exactly at the residual gate
        const auto accepted = sf::dual_from_right_inverse(F, sf::analysis(canon));
        c.require(sf::verify_dual(F, accepted).pass, "accepted right inverse fails verify_dual");
        std::vector<sf::ModuleOperator> doubled;
        for (const auto& op : canon.ops()) doubled.emplace_back(ctx, 2.0 * op.mat());
        bool rejected = false;
        try {
            sf::dual_from_right_inverse(F, sf::SequenceOperator(ctx, doubled));
        } catch (const sf::NotARightInverse&) {
            rejected = true;
        }
        c.require(rejected, "scaled non-right-inverse was accepted");

        // (4) S_Omega = S^{-1} + eta^*(I - theta S^{-1} theta^*) eta
        c.require(sf::dual_frame_operator_identity(F, canon).second <= 1e-9,
                  "frame-operator identity fails for the canonical dual");
        c.require(sf::dual_frame_operator_identity(F, omega).second <= 1e-9,
                  "frame-operator identity fails for the Bessel-derived dual");

        // (5) psi = 0 gives the canonical dual; psi = eta_D is a fixed point
        const sf::SequenceOperator zero(
            ctx, std::vector<sf::ModuleOperator>(static_cast<std::size_t>(N),
                                                 sf::ModuleOperator::zero(ctx)));
        const auto eta0 = sf::right_inverse_from_psi(F, zero);
        double diff0 = 0.0;
        for (int i = 0; i < N; ++i)
            diff0 = std::max(diff0,
                             (eta0.row(i).mat() - canon.op(i).mat()).cwiseAbs().maxCoeff());
        c.require(diff0 <= 1e-12, "psi = 0 does not reproduce the canonical dual");

        const auto eta_fixed = sf::right_inverse_from_psi(F, sf::analysis(omega));
        double diff_fixed = 0.0;
        for (int i = 0; i < N; ++i)
            diff_fixed = std::max(
                diff_fixed, (eta_fixed.row(i).mat() - omega.op(i).mat()).cwiseAbs().maxCoeff());
        c.require(diff_fixed <= 1e-12, "psi = eta_D is not a fixed point");

        // (6) Delta = 0 and Delta = canonical reproduce the canonical dual;
        //     a random Delta gives a distinct verified dual
        std::vector<sf::ModuleOperator> zeros(static_cast<std::size_t>(N),
                                              sf::ModuleOperator::zero(ctx));
        c.require(frame_diff(sf::dual_from_bessel(F, sf::OperatorFrame(std::move(zeros))), canon) <=
                      1e-12,
                  "Delta = 0 does not reproduce the canonical dual");
        c.require(frame_diff(sf::dual_from_bessel(F, canon), canon) <= 1e-12,
                  "Delta = canonical does not reproduce the canonical dual");
        c.require(sf::verify_dual(F, omega).pass, "Bessel-derived dual fails verify_dual");
        if (N * ctx.flat_dim() > ctx.flat_dim())
            c.require(frame_diff(omega, canon) > 1e-6,
                      "random Delta did not produce a distinct dual at the recorded seed");
    }
    return c;
}

// 3. For N = 1 invertible frames the canonical dual is the unique dual.
Check criterion3() {
    Check c;
    const std::vector<sf::FrameContext> ctxs{{1, 1}, {1, 2}, {2, 1}, {2, 2}, {3, 1}};
    std::uint64_t seed = 300000;
    for (const auto& ctx : ctxs) {
        const auto F = sf::random_frame(ctx, 1, ++seed);
        if (!sf::is_frame(F)) {
            c.fail("singleton instance unexpectedly fails is_frame");
            continue;
        }
        const auto canon = sf::canonical_dual(F);
        for (int t = 0; t < 10; ++t) {
            const auto delta = sf::random_frame(ctx, 1, ++seed);
            const double diff = frame_diff(sf::dual_from_bessel(F, delta), canon);
            if (diff > 1e-10) {
                std::ostringstream os;
                os << "non-canonical dual for a singleton frame, diff " << diff;
                c.fail(os.str());
            }
        }
    }
    return c;
}

// 4. Vector frames: S = S_Lambda as matrices, and the vector dual formula
//    agrees with the operator-side construction.
Check criterion4() {
    Check c;
    std::uint64_t seed = 400000;
    for (int n = 1; n <= 3; ++n)
        for (int count = 1; count <= 5; ++count)
            for (int s = 0; s < 5; ++s) {
                sf::Rng rng(++seed);
                std::vector<sf::AlgebraElement> fs, hs;
                for (int j = 0; j < count; ++j) fs.emplace_back(rng.matrix(n, n));
                for (int j = 0; j < count; ++j) hs.emplace_back(rng.matrix(n, n));

                const sf::FrameContext ctx{n, 1};
                const auto F = sf::vector_frame(ctx, fs);
                if (!sf::is_frame(F)) continue;

                // S = S_Lambda: direct accumulation vs the frame operator
                Mat S = Mat::Zero(n, n);
                for (const auto& f : fs) S += f.mat().adjoint() * f.mat();
                if ((S - F.spectrum().gram).cwiseAbs().maxCoeff() > 1e-12)
                    c.fail("S != S_Lambda beyond 1e-12");

                const auto gs = sf::vector_dual(fs, hs);
                const auto omega = sf::dual_from_bessel(F, sf::vector_frame(ctx, hs));
                for (int j = 0; j < count; ++j) {
                    const double diff = (gs[static_cast<std::size_t>(j)].mat().adjoint() -
                                         omega.op(j).mat())
                                            .cwiseAbs()
                                            .maxCoeff();
                    if (diff > 1e-10) {
                        std::ostringstream os;
                        os << "vector dual deviates from the operator-side dual by " << diff;
                        c.fail(os.str());
                    }
                }
            }
    return c;
}

// 5. Tensor suite: factorization, spectrum multiplicativity, canonical-dual
//    commutation, dual verification, and the three-factor modes.
Check criterion5() {
    Check c;
    const auto F = sf::random_frame(sf::FrameContext{2, 1}, 2, 500001);
    const auto G = sf::random_frame(sf::FrameContext{1, 2}, 3, 500002);
    const auto H = sf::random_frame(sf::FrameContext{1, 1}, 2, 500003);
    if (!sf::is_frame(F) || !sf::is_frame(G) || !sf::is_frame(H)) {
        c.fail("tensor factors unexpectedly fail is_frame");
        return c;
    }

    const auto T = sf::tensor_frame(F, G);
    const Mat expect =
        Eigen::kroneckerProduct(F.spectrum().gram, G.spectrum().gram).eval();
    c.require((T.spectrum().gram - expect).norm() / expect.norm() <= 1e-12,
              "frame-operator factorization beyond 1e-12 relative");

    std::vector<double> products;
    for (Eigen::Index i = 0; i < F.spectrum().eigenvalues.size(); ++i)
        for (Eigen::Index j = 0; j < G.spectrum().eigenvalues.size(); ++j)
            products.push_back(F.spectrum().eigenvalues(i) * G.spectrum().eigenvalues(j));
    std::sort(products.begin(), products.end());
    for (Eigen::Index i = 0; i < T.spectrum().eigenvalues.size(); ++i)
        c.require(std::abs(T.spectrum().eigenvalues(i) -
                           products[static_cast<std::size_t>(i)]) <= 1e-10,
                  "eigenvalue multiplicativity beyond 1e-10");

    const auto Fd = sf::canonical_dual(F);
    const auto Gd = sf::canonical_dual(G);
    c.require(frame_diff(sf::tensor_frame(Fd, Gd), sf::canonical_dual(T)) <= 1e-10,
              "tensor of canonical duals differs from canonical dual of the tensor");

    const auto pair = sf::verify_tensor_dual(F, Fd, G, Gd);
    c.require(pair.residual <= 1e-9, "verify_tensor_dual residual beyond 1e-9");
    c.require(pair.pass, "verify_tensor_dual fails");

    const std::vector<sf::OperatorFrame> frames{F, G, H};
    const std::vector<sf::OperatorFrame> duals{Fd, Gd, sf::canonical_dual(H)};
    const auto full = sf::nfold_tensor(frames, duals, sf::TensorMode::full);
    c.require(full.pass, "three-factor full-mode tensor fails");

    // diagonal corollary check on families whose shared-index pairing is dual:
    // Parseval singletons, and {U_0, U_1} frames with duals supported on j=0
    std::vector<sf::OperatorFrame> ps{parseval_singleton(sf::FrameContext{2, 1}, 500004),
                                      parseval_singleton(sf::FrameContext{1, 2}, 500005),
                                      parseval_singleton(sf::FrameContext{1, 1}, 500006)};
    const auto diag = sf::nfold_tensor(ps, ps, sf::TensorMode::diagonal);
    c.require(diag.pass, "three-factor diagonal-mode tensor fails on Parseval singletons");

    std::vector<sf::OperatorFrame> fams, dls;
    for (int f = 0; f < 3; ++f) {
        const sf::FrameContext ctx{2, 1};
        const Mat u0 = parseval_singleton(ctx, 500010 + static_cast<std::uint64_t>(f)).op(0).mat();
        const Mat u1 = parseval_singleton(ctx, 500020 + static_cast<std::uint64_t>(f)).op(0).mat();
        fams.push_back(sf::OperatorFrame({sf::ModuleOperator(ctx, u0), sf::ModuleOperator(ctx, u1)}));
        dls.push_back(sf::OperatorFrame({sf::ModuleOperator(ctx, u0), sf::ModuleOperator::zero(ctx)}));
    }
    const auto diag2 = sf::nfold_tensor(fams, dls, sf::TensorMode::diagonal);
    c.require(diag2.pass, "three-factor diagonal-mode tensor fails on shared-index duals");

    if (c.ok) {
        std::ostringstream os;
        os << "tensor residual " << pair.residual << ", full " << full.residual << ", diagonal "
           << diag.residual;
        c.detail = os.str();
    }
    return c;
}

// 6. Optimal bounds pass the 1000-sample check with violations below
//    1e-10*||G||; an inflated lower bound is refuted at recorded seeds.
Check criterion6() {
    Check c;
    struct Instance {
        sf::OperatorFrame F;
        std::uint64_t sample_seed;
        std::uint64_t violation_seed; // 0: refutation not sampled for this shape
    };
    // Refutation seeds are recorded only where sampling has power. For k = 1
    // the sample x is square and a.s. invertible, so x(G - a^2 I)x^H keeps
    // the negative inertia of the inflated defect (Sylvester) and every
    // sample refutes. For n = 1 the defect is scalar and refutes at a few
    // percent per sample. For n >= 2, k >= 2 the wide sample compresses rank
    // and the positive spectrum masks a 1.01-fold inflation; that shape only
    // runs the pass half.
    const std::vector<Instance> instances{
        {hand_frame(), 600001, 600002},
        {sf::random_frame(sf::FrameContext{2, 2}, 4, 600100), 600101, 0},
        {sf::random_frame(sf::FrameContext{3, 1}, 3, 600200), 600201, 600202},
        {sf::random_frame(sf::FrameContext{1, 3}, 4, 600300), 600301, 600303},
    };

    for (const auto& inst : instances) {
        if (!sf::is_frame(inst.F)) {
            c.fail("bounds instance unexpectedly fails is_frame");
            continue;
        }
        const auto [lo, hi] = sf::optimal_scalar_bounds(inst.F);
        const double gnorm = inst.F.spectrum().eig_max();

        const auto report =
            sf::verify_star_bounds(inst.F, sf::StarBounds::scalar(lo, hi), 1000, inst.sample_seed);
        if (report.worst_violation > 1e-10 * gnorm) {
            std::ostringstream os;
            os << "optimal bounds violated by " << report.worst_violation << " > 1e-10*||G||";
            c.fail(os.str());
        }

        if (inst.violation_seed == 0) continue;
        const double inflated = 1.01 * lo;
        if (inflated > hi) {
            c.fail("instance too tight to inflate the lower bound");
            continue;
        }
        const auto refuted = sf::verify_star_bounds(inst.F, sf::StarBounds::scalar(inflated, hi),
                                                    1000, inst.violation_seed);
        c.require(!refuted.all_pass,
                  "inflated lower bound was not refuted at the recorded seed");
    }
    return c;
}

// 7. CLI contract: byte-identical round-trips and the 0/1/2/3 exit codes on
//    the four fixture classes.
struct CliRunner {
    std::string exe;
    std::filesystem::path dir;

    int run(const std::string& args) const {
        const std::string cmd = "\"" + exe + "\" " + args + " >/dev/null 2>&1";
        const int rc = std::system(cmd.c_str());
        if (rc == -1) return -1;
        return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    }
    std::string file(const std::string& name) const { return (dir / name).string(); }
};

Check criterion7() {
    Check c;
    const char* exe = std::getenv("STARFRAMES_CLI");
    if (exe == nullptr || std::string(exe).empty()) {
        c.fail("STARFRAMES_CLI is not set; cannot locate the CLI binary");
        return c;
    }

    CliRunner cli;
    cli.exe = exe;
    cli.dir = std::filesystem::temp_directory_path() /
              ("starframes_acceptance_" + std::to_string(::getpid()));
    std::filesystem::create_directories(cli.dir);

    const std::string valid = cli.file("valid.json");
    const std::string valid2 = cli.file("valid2.json");

    // exit 0 on a valid frame, and deterministic generation
    c.require(cli.run("random --n 2 --k 2 --count 4 --seed 7 --out \"" + valid + "\"") == 0,
              "random generation failed");
    c.require(cli.run("random --n 2 --k 2 --count 4 --seed 7 --out \"" + valid2 + "\"") == 0,
              "repeated random generation failed");
    c.require(sf::io::read_file(valid) == sf::io::read_file(valid2),
              "identical flags did not produce byte-identical files");
    c.require(cli.run("check \"" + valid + "\"") == 0, "check on a valid frame must exit 0");

    // save -> load -> save byte identity
    const std::string rt = cli.file("roundtrip.json");
    sf::io::save_frame(rt, sf::io::load_frame(valid));
    c.require(sf::io::read_file(rt) == sf::io::read_file(valid),
              "save/load/save round-trip is not byte-identical");

    // dual pipeline: compute, verify, and re-derive deterministically
    const std::string dual1 = cli.file("dual1.json");
    const std::string dual2 = cli.file("dual2.json");
    c.require(cli.run("dual \"" + valid + "\" --out \"" + dual1 + "\"") == 0,
              "canonical dual via the CLI failed");
    c.require(cli.run("dual \"" + valid + "\" --out \"" + dual2 + "\"") == 0,
              "second canonical dual via the CLI failed");
    c.require(sf::io::read_file(dual1) == sf::io::read_file(dual2),
              "dual output is not deterministic");
    c.require(cli.run("verify-dual \"" + valid + "\" \"" + dual1 + "\"") == 0,
              "verify-dual on the canonical pair must exit 0");

    // exit 1: malformed JSON
    const std::string malformed = cli.file("malformed.json");
    sf::io::write_file(malformed, "{ this is not json\n");
    c.require(cli.run("check \"" + malformed + "\"") == 1, "malformed JSON must exit 1");
    c.require(cli.run("check \"" + cli.file("missing.json") + "\"") == 1,
              "a missing file must exit 1");
    c.require(cli.run("bogus-subcommand") == 1, "usage errors must exit 1");

    // exit 2: Bessel-only family (singular gram)
    const sf::FrameContext ctx{1, 2};
    Mat sing = Mat::Zero(2, 2);
    sing(0, 0) = 1.0;
    const std::string singular = cli.file("singular.json");
    sf::io::save_frame(singular, sf::OperatorFrame({sf::ModuleOperator(ctx, sing)}));
    c.require(cli.run("check \"" + singular + "\"") == 2, "a singular frame must exit 2");
    c.require(cli.run("dual \"" + singular + "\"") == 2,
              "dual of a singular frame must exit 2");

    // exit 3: corrupted dual
    const auto F = sf::io::load_frame(valid);
    auto ops = sf::canonical_dual(F).ops();
    Mat m = ops[0].mat();
    m(0, 0) += 1e-3;
    ops[0] = sf::ModuleOperator(F.ctx(), m);
    const std::string corrupted = cli.file("corrupted_dual.json");
    sf::io::save_frame(corrupted, sf::OperatorFrame(std::move(ops)));
    c.require(cli.run("verify-dual \"" + valid + "\" \"" + corrupted + "\"") == 3,
              "a corrupted dual must exit 3");

    std::filesystem::remove_all(cli.dir);
    return c;
}

} // namespace

int main() {
    struct Entry {
        const char* name;
        Check (*fn)();
    };
    const Entry entries[] = {
        {"canonical-dual reconstruction across desk-scale contexts", criterion1},
        {"dual parametrization suite (six parts)", criterion2},
        {"uniqueness of the dual for non-redundant frames", criterion3},
        {"vector-frame operator and dual agreement", criterion4},
        {"tensor-product suite", criterion5},
        {"scalar bound semantics under sampling", criterion6},
        {"CLI contract: round-trip and exit codes", criterion7},
    };

    int failures = 0;
    int index = 0;
    for (const auto& e : entries) {
        ++index;
        Check c;
        try {
            c = e.fn();
        } catch (const std::exception& ex) {
            c.ok = false;
            c.detail = std::string("unexpected exception: ") + ex.what();
        }
        if (c.ok) {
            std::cout << "PASS  criterion " << index << ": " << e.name;
            if (!c.detail.empty()) std::cout << " (" << c.detail << ")";
            std::cout << "\n";
        } else {
            ++failures;
            std::cout << "FAIL  criterion " << index << ": " << e.name << " -- " << c.detail
                      << "\n";
        }
    }
    return failures;
}
