#pragma once

#include <string>

#include "json.hpp"
#include "ks/correspondence.hpp"
#include "ks/galois.hpp"
#include "ks/kuga_satake.hpp"
#include "ks/lattice.hpp"

namespace ks {

using ordered_json = nlohmann::ordered_json;

// all documents use string numerics: decimal for integers, "p/q" for
// rationals, two-element arrays [a, b] for a + b*sqrt(D), decimal-with-
// exponent strings in float mode
std::string int_str(const mpz_class& v);
std::string rat_str(const mpq_class& v);
std::string float_str(const mpf_class& v);
std::string scalar_str(const Scalar& s);

mpz_class parse_int(const ordered_json& j);
mpq_class parse_rational(const ordered_json& j);

ordered_json scalar_to_json(const Scalar& s);

ordered_json matrix_to_json(const ZMat& m);
ordered_json matrix_to_json(const QMat& m);
ordered_json matrix_to_json(const SMat& m);
ZMat zmat_from_json(const ordered_json& j);

ordered_json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const ordered_json& j);
std::string dump_document(const ordered_json& j); // dump(2) plus trailing newline

QuadLattice lattice_from_json(const ordered_json& j);
ordered_json lattice_to_json(const QuadLattice& L);

// {"q": [...], "terms": [{"subset": [1, 2], "coeff": ...}, ...]}; subsets are
// 1-based index lists
struct CliffordDoc {
    CliffordContext ctx;
    CliffordElement elem;
};
CliffordDoc clifford_from_json(const ordered_json& j);
ordered_json clifford_to_json(const CliffordContext& ctx, const CliffordElement& e);

// {"q": [...], "f1": [...], "f2": [...]} with optional "D", "mode"
// ("exact"/"float"), "precision" (bits), "eps"
struct PeriodDoc {
    CliffordContext ctx;
    K3Period period;
};
PeriodDoc period_from_json(const ordered_json& j);

// {"rank": r, "gram": [[...]], "generators": [[[...]]], "pic_basis": [[...]]};
// T is the orthogonal complement of pic
struct GaloisSetup {
    GaloisModule H;
    SubLattice pic;
    SubLattice T;
};
GaloisSetup galois_setup_from_json(const ordered_json& j);

ordered_json torus_to_json(const PolarizedTorus& t);
ordered_json torus_metadata_json(int n); // rank/dimension only, for guarded sizes

ordered_json picard_report_json(const SubLattice& lat, const QMat& ambient_gram, bool certified);
ordered_json full_picard_report_json(const FullPicard& fp, const QuadLattice& H);

ordered_json sieve_report_json(const SieveReport& r);
ordered_json sequence_report_json(const SequenceReport& r);

} // namespace ks
