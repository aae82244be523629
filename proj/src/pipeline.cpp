#include "ks/pipeline.hpp"

#include <future>

#include "ks/errors.hpp"

namespace ks {

void PipelineConfig::validate() const {
    require(guard == 0 || guard >= 2, "guard must be at least 2");
    require(closure_bound >= 1, "closure bound must be positive");
    require(threads >= 1, "threads must be positive");
    require(scan_count >= 0, "scan count must be nonnegative");
    require(mw >= 1, "the annihilator constant must be at least 1");
}

namespace {

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ValidationError& e) {
        throw ValidationError(std::string(name) + ": " + e.what());
    } catch (const GuardExceeded& e) {
        throw GuardExceeded(std::string(name) + ": " + e.what());
    } catch (const InvariantViolation& e) {
        throw InvariantViolation(std::string(name) + ": " + e.what());
    }
}

} // namespace

ordered_json run_pipeline(const PipelineConfig& cfg, const ordered_json& period_doc) {
    cfg.validate();
    int unverified = 0;
    ordered_json report;

    PeriodDoc doc = stage("parse", [&] { return period_from_json(period_doc); });
    if (cfg.guard > 0) {
        doc.ctx.dense_guard = cfg.guard;
        doc.period.ctx.dense_guard = cfg.guard;
    }
    int n = doc.period.ctx.n();

    {
        PicardResult pr = stage("picard", [&] { return picard_from_period(doc.period); });
        QMat diag(n, n);
        for (int i = 0; i < n; ++i) diag(i, i) = doc.period.ctx.q[i].as_rational();
        report["picard"] = picard_report_json(pr.lattice, diag, pr.certified);
        if (!pr.certified) ++unverified;
    }

    if (n > doc.period.ctx.guard()) {
        report["torus"] = torus_metadata_json(n);
    } else {
        PolarizedTorus t = stage("torus", [&] { return kuga_satake_torus(doc.period); });
        report["torus"] = torus_to_json(t);
        if (!t.verified) ++unverified;
    }

    if (cfg.setup_path.has_value()) {
        GaloisSetup setup = stage("setup", [&] {
            return galois_setup_from_json(read_json_file(*cfg.setup_path));
        });
        SieveReport sieve = stage("sieve", [&] {
            return good_prime_sieve(setup.H, setup.pic, setup.T, cfg.exclusions, cfg.mw,
                                    cfg.scan_count);
        });
        report["sieve"] = sieve_report_json(sieve);

        // the excluded primes are the bad primes; bound each one, fanning out
        // when asked and merging in the fixed prime order
        const std::vector<mpz_class>& primes = sieve.excluded;
        std::vector<mpz_class> bounds(primes.size());
        stage("bound", [&] {
            if (cfg.threads <= 1 || primes.size() <= 1) {
                for (size_t i = 0; i < primes.size(); ++i)
                    bounds[i] = bad_prime_bound(setup.H, setup.pic, setup.T, primes[i]);
            } else {
                std::vector<std::future<mpz_class>> futures;
                for (size_t i = 0; i < primes.size(); ++i)
                    futures.push_back(std::async(std::launch::async, [&, i] {
                        return bad_prime_bound(setup.H, setup.pic, setup.T, primes[i]);
                    }));
                for (size_t i = 0; i < primes.size(); ++i) bounds[i] = futures[i].get();
            }
            return 0;
        });

        ordered_json bj = ordered_json::array();
        for (size_t i = 0; i < primes.size(); ++i) {
            ordered_json one;
            one["ell"] = int_str(primes[i]);
            one["bound"] = int_str(bounds[i]);
            bj.push_back(std::move(one));
        }
        report["bounds"] = bj;
    }

    report["unverified_count"] = unverified;
    return report;
}

} // namespace ks
