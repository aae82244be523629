#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ks/arith_aux.hpp"
#include "ks/errors.hpp"
#include "ks/io.hpp"
#include "ks/pipeline.hpp"
#include "ks/selftest.hpp"

namespace {

using ks::ordered_json;

void emit(const ordered_json& j, const std::string& out_path) {
    if (out_path.empty())
        std::cout << ks::dump_document(j);
    else
        ks::write_json_file(out_path, j);
}

std::vector<mpz_class> parse_prime_list(const std::vector<std::string>& items) {
    std::vector<mpz_class> out;
    for (const auto& s : items) {
        try {
            out.emplace_back(s);
        } catch (const std::invalid_argument&) {
            throw ks::ValidationError("not an integer: " + s);
        }
    }
    return out;
}

mpz_class parse_big(const std::string& s, const char* what) {
    try {
        return mpz_class(s);
    } catch (const std::invalid_argument&) {
        throw ks::ValidationError(std::string("not an integer ") + what + ": " + s);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kuga-Satake pipeline toolkit"};
    app.require_subcommand(1);
    int exit_code = 0;

    // lattice info / canonical K3 diagonalization data
    auto* lattice_cmd = app.add_subcommand("lattice", "lattice inspection");
    lattice_cmd->require_subcommand(1);
    {
        auto* info = lattice_cmd->add_subcommand("info", "rank, discriminant, signature");
        auto in = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        info->add_option("--in", *in, "lattice document")->required();
        info->add_option("--out", *out, "output path (default stdout)");
        info->callback([in, out] {
            ks::QuadLattice L = ks::lattice_from_json(ks::read_json_file(*in));
            ordered_json j;
            j["rank"] = L.rank();
            j["discriminant"] = ks::int_str(ks::det_bareiss(L.gram));
            ks::Signature s = ks::signature_symmetric(ks::to_qmat(L.gram));
            j["signature"] = ordered_json::array({s.pos, s.neg, s.zero});
            emit(j, *out);
        });

        auto* k3 = lattice_cmd->add_subcommand(
            "k3", "orthogonal diagonalization data of the degree-2d primitive lattice");
        auto degree = std::make_shared<long>(1);
        auto out2 = std::make_shared<std::string>();
        k3->add_option("--degree", *degree, "polarization degree d")->check(CLI::PositiveNumber);
        k3->add_option("--out", *out2, "output path (default stdout)");
        k3->callback([degree, out2] {
            ks::K3Data data = ks::k3_period_lattice(*degree);
            ks::OrthoBasis ob = ks::orthogonal_basis(data.P_lattice);
            ordered_json j;
            j["degree"] = static_cast<int>(*degree);
            ordered_json q = ordered_json::array();
            for (const auto& x : ob.q) q.push_back(ks::int_str(x));
            j["q"] = q;
            j["diag_to_p"] = ks::matrix_to_json(ob.rows);
            j["index"] = ks::int_str(ob.index);
            emit(j, *out2);
        });
    }

    // clifford element arithmetic on documents
    auto* clifford_cmd = app.add_subcommand("clifford", "even Clifford arithmetic");
    clifford_cmd->require_subcommand(1);
    {
        auto* mul = clifford_cmd->add_subcommand("mul", "product of two element documents");
        auto a = std::make_shared<std::string>();
        auto b = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        mul->add_option("--a", *a, "left factor document")->required();
        mul->add_option("--b", *b, "right factor document")->required();
        mul->add_option("--out", *out, "output path (default stdout)");
        mul->callback([a, b, out] {
            ks::CliffordDoc da = ks::clifford_from_json(ks::read_json_file(*a));
            ks::CliffordDoc db = ks::clifford_from_json(ks::read_json_file(*b));
            ks::require(da.ctx.q.size() == db.ctx.q.size(), "operand ranks differ");
            for (size_t i = 0; i < da.ctx.q.size(); ++i)
                ks::require(da.ctx.q[i] == db.ctx.q[i], "operand diagonals differ");
            ks::CliffordElement prod = ks::multiply(da.ctx, da.elem, db.elem);
            emit(ks::clifford_to_json(da.ctx, prod), *out);
        });

        auto* io = clifford_cmd->add_subcommand("iota", "reversal anti-involution");
        auto ain = std::make_shared<std::string>();
        auto out2 = std::make_shared<std::string>();
        io->add_option("--a", *ain, "element document")->required();
        io->add_option("--out", *out2, "output path (default stdout)");
        io->callback([ain, out2] {
            ks::CliffordDoc da = ks::clifford_from_json(ks::read_json_file(*ain));
            emit(ks::clifford_to_json(da.ctx, ks::iota(da.elem)), *out2);
        });
    }

    // torus construction
    auto* ks_cmd = app.add_subcommand("ks", "Kuga-Satake torus");
    ks_cmd->require_subcommand(1);
    {
        auto* build = ks_cmd->add_subcommand("build", "build the polarized torus from a period");
        auto period = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        build->add_option("--period", *period, "period document")->required();
        build->add_option("--out", *out, "output path (default stdout)");
        build->callback([period, out] {
            ks::PeriodDoc doc = ks::period_from_json(ks::read_json_file(*period));
            int n = doc.period.ctx.n();
            if (n > doc.period.ctx.guard()) {
                emit(ks::torus_metadata_json(n), *out);
            } else {
                emit(ks::torus_to_json(ks::kuga_satake_torus(doc.period)), *out);
            }
        });
    }

    // Picard recovery
    {
        auto* picard = app.add_subcommand("picard", "Picard lattice from a period");
        auto period = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto full = std::make_shared<bool>(false);
        auto degree = std::make_shared<long>(1);
        picard->add_option("--period", *period, "period document")->required();
        picard->add_flag("--full", *full, "saturate with the polarization class in H2");
        picard->add_option("--degree", *degree, "polarization degree d for --full")
            ->check(CLI::PositiveNumber);
        picard->add_option("--out", *out, "output path (default stdout)");
        picard->callback([period, out, full, degree] {
            ks::PeriodDoc doc = ks::period_from_json(ks::read_json_file(*period));
            if (!*full) {
                ks::PicardResult pr = ks::picard_from_period(doc.period);
                int n = doc.period.ctx.n();
                ks::QMat diag(n, n);
                for (int i = 0; i < n; ++i) diag(i, i) = doc.period.ctx.q[i].as_rational();
                emit(ks::picard_report_json(pr.lattice, diag, pr.certified), *out);
                return;
            }
            ks::K3Data k3 = ks::k3_period_lattice(*degree);
            ks::OrthoBasis ob = ks::orthogonal_basis(k3.P_lattice);
            ks::require(static_cast<int>(ob.q.size()) == doc.period.ctx.n(),
                        "period rank must be 21 for --full");
            for (size_t i = 0; i < ob.q.size(); ++i)
                ks::require(ks::Scalar(ob.q[i]) == doc.period.ctx.q[i],
                            "period q does not match the canonical diagonalization; "
                            "see lattice k3 --degree");
            ks::FullPicard fp = ks::picard_full(k3, ob.rows, doc.period);
            emit(ks::full_picard_report_json(fp, k3.H), *out);
        });
    }

    // Galois / Brauer bookkeeping
    auto* brauer_cmd = app.add_subcommand("brauer", "good-prime sieve and bad-prime bounds");
    brauer_cmd->require_subcommand(1);
    {
        auto* sieve = brauer_cmd->add_subcommand("sieve", "excluded primes and good-prime scan");
        auto setup = std::make_shared<std::string>();
        auto mw = std::make_shared<std::string>("1");
        auto exclude = std::make_shared<std::vector<std::string>>();
        auto scan = std::make_shared<int>(8);
        auto out = std::make_shared<std::string>();
        sieve->add_option("--setup", *setup, "Galois setup document")->required();
        sieve->add_option("--mw", *mw, "annihilator constant M");
        sieve->add_option("--exclude", *exclude, "extra primes to exclude")->delimiter(',');
        sieve->add_option("--scan", *scan, "number of good primes to report");
        sieve->add_option("--out", *out, "output path (default stdout)");
        sieve->callback([setup, mw, exclude, scan, out] {
            ks::GaloisSetup gs = ks::galois_setup_from_json(ks::read_json_file(*setup));
            ks::SieveReport rep =
                ks::good_prime_sieve(gs.H, gs.pic, gs.T, parse_prime_list(*exclude),
                                     parse_big(*mw, "for --mw"), *scan);
            emit(ks::sieve_report_json(rep), *out);
        });

        auto* bound = brauer_cmd->add_subcommand("bound", "stabilized bad-prime bound");
        auto setup2 = std::make_shared<std::string>();
        auto prime = std::make_shared<std::string>();
        auto rank_one = std::make_shared<bool>(false);
        auto nlevel = std::make_shared<int>(0);
        auto out2 = std::make_shared<std::string>();
        bound->add_option("--setup", *setup2, "Galois setup document")->required();
        bound->add_option("--prime", *prime, "prime ell")->required();
        bound->add_flag("--rank-one", *rank_one, "also run the wedge route (pic rank 1)");
        bound->add_option("--sequence-n", *nlevel, "also report the four-term data at this n");
        bound->add_option("--out", *out2, "output path (default stdout)");
        bound->callback([setup2, prime, rank_one, nlevel, out2] {
            ks::GaloisSetup gs = ks::galois_setup_from_json(ks::read_json_file(*setup2));
            mpz_class ell = parse_big(*prime, "for --prime");
            ordered_json j;
            j["ell"] = ks::int_str(ell);
            j["bound"] = ks::int_str(ks::bad_prime_bound(gs.H, gs.pic, gs.T, ell));
            if (*rank_one) {
                ks::RankOneBound rb = ks::rank_one_bound(gs.H, gs.pic, gs.T, ell);
                j["rank_one_routes_agree"] = rb.routes_agree;
            }
            if (*nlevel > 0)
                j["sequence"] =
                    ks::sequence_report_json(ks::four_term_check(gs.H, gs.pic, gs.T, ell, *nlevel));
            emit(j, *out2);
        });
    }

    // effectivity calculators
    {
        auto* neat = app.add_subcommand("neat", "neat congruence level");
        auto n = std::make_shared<int>();
        auto out = std::make_shared<std::string>();
        neat->add_option("--n", *n, "matrix size")->required()->check(CLI::PositiveNumber);
        neat->add_option("--out", *out, "output path (default stdout)");
        neat->callback([n, out] {
            ks::NeatCertificate cert = ks::neat_congruence_level(*n);
            ordered_json j;
            j["n"] = cert.n;
            j["prime"] = ks::int_str(cert.prime);
            j["n_factorial"] = ks::int_str(cert.n_factorial);
            emit(j, *out);
        });

        auto* fujino = app.add_subcommand("fujino", "separation criterion");
        auto dim = std::make_shared<int>();
        auto cs = std::make_shared<std::vector<std::string>>();
        auto out2 = std::make_shared<std::string>();
        fujino->add_option("--dim", *dim, "dimension")->required()->check(CLI::PositiveNumber);
        fujino->add_option("--c", *cs, "c(1..dim), comma separated rationals")
            ->required()
            ->delimiter(',');
        fujino->add_option("--out", *out2, "output path (default stdout)");
        fujino->callback([dim, cs, out2] {
            std::vector<mpq_class> c;
            for (const auto& s : *cs) {
                try {
                    mpq_class v(s);
                    v.canonicalize();
                    c.push_back(v);
                } catch (const std::invalid_argument&) {
                    throw ks::ValidationError("not a rational: " + s);
                }
            }
            ks::TriState t = ks::fujino_separation_check(*dim, c);
            ordered_json j;
            j["dim"] = *dim;
            ordered_json carr = ordered_json::array();
            for (const auto& v : c) carr.push_back(ks::rat_str(v));
            j["c"] = carr;
            j["separates"] = t == ks::TriState::yes            ? "yes"
                             : t == ks::TriState::indeterminate ? "indeterminate"
                                                                : "no";
            emit(j, *out2);
        });
    }

    // end-to-end orchestration
    {
        auto* pipeline = app.add_subcommand("pipeline", "full report from a period document");
        auto period = std::make_shared<std::string>();
        auto cfg = std::make_shared<ks::PipelineConfig>();
        auto setup = std::make_shared<std::string>();
        auto mw = std::make_shared<std::string>("1");
        auto exclude = std::make_shared<std::vector<std::string>>();
        auto out = std::make_shared<std::string>();
        pipeline->add_option("--period", *period, "period document")->required();
        pipeline->add_option("--setup", *setup, "Galois setup document");
        pipeline->add_option("--mw", *mw, "annihilator constant M");
        pipeline->add_option("--exclude", *exclude, "extra primes to exclude")->delimiter(',');
        pipeline->add_option("--threads", cfg->threads, "fan-out for the bound stage");
        pipeline->add_option("--guard", cfg->guard, "dense rank guard override");
        pipeline->add_option("--closure", cfg->closure_bound, "group closure bound");
        pipeline->add_option("--scan", cfg->scan_count, "good primes to report");
        pipeline->add_option("--out", *out, "output path (default stdout)");
        pipeline->callback([period, cfg, setup, mw, exclude, out] {
            if (!setup->empty()) cfg->setup_path = *setup;
            cfg->mw = parse_big(*mw, "for --mw");
            cfg->exclusions = parse_prime_list(*exclude);
            if (!out->empty()) cfg->out_path = *out;
            ordered_json rep = ks::run_pipeline(*cfg, ks::read_json_file(*period));
            emit(rep, out->empty() ? std::string() : *out);
        });
    }

    // bundled battery
    {
        auto* selftest = app.add_subcommand("selftest", "run the bundled example battery");
        auto e8 = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        selftest->add_option("--e8", *e8, "lattice document checked against E8 invariants");
        selftest->add_option("--out", *out, "output path (default stdout)");
        selftest->callback([e8, out, &exit_code] {
            std::optional<std::string> fixture;
            if (!e8->empty()) fixture = *e8;
            ks::SelfTestResult res = ks::run_selftest(fixture);
            ordered_json j;
            j["passed"] = res.passed;
            j["failed"] = res.failed;
            j["unverified"] = res.unverified;
            ordered_json fails = ordered_json::array();
            for (const auto& f : res.failures) fails.push_back(f);
            j["failures"] = fails;
            emit(j, *out);
            if (!res.ok()) exit_code = 1;
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const ks::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const ks::GuardExceeded& e) {
        std::cerr << "guard exceeded: " << e.what() << "\n";
        return 2;
    } catch (const ks::InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return exit_code;
}
