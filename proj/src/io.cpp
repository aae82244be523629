#include "ks/io.hpp"

#include <fstream>

#include "ks/errors.hpp"

namespace ks {

std::string int_str(const mpz_class& v) { return v.get_str(); }

std::string rat_str(const mpq_class& v) { return v.get_str(); }

std::string float_str(const mpf_class& v) {
    mp_exp_t e;
    std::string digits = v.get_str(e);
    if (digits.empty() || digits == "-") return "0";
    std::string sign;
    if (digits[0] == '-') {
        sign = "-";
        digits = digits.substr(1);
    }
    return sign + "0." + digits + "e" + std::to_string(e);
}

std::string scalar_str(const Scalar& s) { return s.str(); }

mpz_class parse_int(const ordered_json& j) {
    if (j.is_number_integer() || j.is_number_unsigned())
        return mpz_class(std::to_string(j.get<long long>()));
    if (j.is_string()) {
        try {
            return mpz_class(j.get<std::string>());
        } catch (const std::invalid_argument&) {
            throw ValidationError("not an integer: " + j.get<std::string>());
        }
    }
    throw ValidationError("expected an integer, got " + j.dump());
}

mpq_class parse_rational(const ordered_json& j) {
    if (j.is_number_integer() || j.is_number_unsigned()) return mpq_class(parse_int(j));
    if (j.is_string()) {
        try {
            mpq_class v(j.get<std::string>());
            require(v.get_den() != 0, "zero denominator");
            v.canonicalize();
            return v;
        } catch (const std::invalid_argument&) {
            throw ValidationError("not a rational: " + j.get<std::string>());
        }
    }
    throw ValidationError("expected a rational, got " + j.dump());
}

ordered_json scalar_to_json(const Scalar& s) {
    switch (s.mode()) {
    case ScalarMode::Rational:
        return rat_str(s.rat());
    case ScalarMode::Quadratic:
        return ordered_json::array({rat_str(s.rat()), rat_str(s.surd())});
    case ScalarMode::BigFloat:
        return float_str(s.flt());
    }
    throw InvariantViolation("unknown scalar mode");
}

ordered_json matrix_to_json(const ZMat& m) {
    ordered_json rows = ordered_json::array();
    for (int i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(int_str(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

ordered_json matrix_to_json(const QMat& m) {
    ordered_json rows = ordered_json::array();
    for (int i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(rat_str(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

ordered_json matrix_to_json(const SMat& m) {
    ordered_json rows = ordered_json::array();
    for (int i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(scalar_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

ZMat zmat_from_json(const ordered_json& j) {
    require(j.is_array(), "expected an array of rows");
    std::vector<ZVec> rows;
    size_t width = 0;
    for (const auto& rj : j) {
        require(rj.is_array(), "expected a row array");
        if (rows.empty()) width = rj.size();
        require(rj.size() == width, "ragged matrix rows");
        ZVec row;
        for (const auto& x : rj) row.push_back(parse_int(x));
        rows.push_back(std::move(row));
    }
    return ZMat::from_rows(rows, static_cast<int>(width));
}

ordered_json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    try {
        return ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("malformed JSON in " + path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const ordered_json& j) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path);
    out << dump_document(j);
}

std::string dump_document(const ordered_json& j) { return j.dump(2) + "\n"; }

QuadLattice lattice_from_json(const ordered_json& j) {
    require(j.is_object() && j.contains("rank") && j.contains("gram"),
            "lattice document needs rank and gram");
    int rank = static_cast<int>(parse_int(j.at("rank")).get_si());
    ZMat gram = zmat_from_json(j.at("gram"));
    require(gram.rows() == rank && gram.cols() == rank, "gram size does not match rank");
    QuadLattice L{gram};
    L.validate(true);
    return L;
}

ordered_json lattice_to_json(const QuadLattice& L) {
    ordered_json j;
    j["rank"] = L.rank();
    j["gram"] = matrix_to_json(L.gram);
    return j;
}

namespace {

// scalar parsing context shared by clifford and period documents
struct ScalarCodec {
    bool float_mode = false;
    unsigned long precision = 256;
    unsigned long D = 0; // 0 means no radicand declared

    Scalar parse(const ordered_json& j) const {
        if (j.is_array()) {
            require(!float_mode, "quadratic entries are not allowed in float mode");
            require(j.size() == 2, "quadratic scalar needs exactly two entries");
            require(D != 0, "document declares no D for quadratic entries");
            mpq_class a = parse_rational(j.at(0));
            mpq_class b = parse_rational(j.at(1));
            if (b == 0) return Scalar(a);
            return Scalar::quadratic(a, b, D);
        }
        if (float_mode) {
            if (j.is_number_integer() || j.is_number_unsigned())
                return Scalar::bigfloat(mpf_class(parse_int(j), precision));
            require(j.is_string(), "expected a numeric string");
            std::string s = j.get<std::string>();
            if (s.find('/') != std::string::npos) {
                mpq_class v = parse_rational(j);
                return Scalar::bigfloat(mpf_class(v, precision));
            }
            mpf_class f(0, precision);
            if (mpf_set_str(f.get_mpf_t(), s.c_str(), 10) != 0)
                throw ValidationError("not a float: " + s);
            return Scalar::bigfloat(f);
        }
        return Scalar(parse_rational(j));
    }
};

ScalarCodec codec_for(const ordered_json& j) {
    ScalarCodec c;
    if (j.contains("mode")) {
        std::string m = j.at("mode").get<std::string>();
        if (m == "float")
            c.float_mode = true;
        else
            require(m == "exact", "mode must be \"exact\" or \"float\"");
    }
    if (j.contains("precision")) {
        mpz_class p = parse_int(j.at("precision"));
        require(p >= 16 && p <= 1 << 20, "precision out of range");
        c.precision = p.get_ui();
    }
    if (j.contains("D")) {
        mpz_class d = parse_int(j.at("D"));
        require(d >= 2, "D must be at least 2");
        require(is_squarefree(d.get_ui()), "D must be squarefree");
        c.D = d.get_ui();
    }
    return c;
}

std::vector<Scalar> parse_q(const ordered_json& j) {
    require(j.is_object() && j.contains("q"), "document needs the diagonal q");
    require(j.at("q").is_array(), "q must be an array");
    std::vector<Scalar> q;
    for (const auto& x : j.at("q")) q.emplace_back(parse_rational(x));
    return q;
}

} // namespace

CliffordDoc clifford_from_json(const ordered_json& j) {
    CliffordDoc doc;
    doc.ctx.q = parse_q(j);
    doc.ctx.validate();
    ScalarCodec codec = codec_for(j);
    require(j.contains("terms") && j.at("terms").is_array(), "document needs terms");
    for (const auto& tj : j.at("terms")) {
        require(tj.is_object() && tj.contains("subset") && tj.contains("coeff"),
                "each term needs subset and coeff");
        uint32_t mask = 0;
        for (const auto& ij : tj.at("subset")) {
            mpz_class one_based = parse_int(ij);
            require(one_based >= 1 && one_based <= doc.ctx.n(), "subset index out of range");
            uint32_t bit = uint32_t(1) << (one_based.get_ui() - 1);
            require((mask & bit) == 0, "repeated subset index");
            mask |= bit;
        }
        doc.elem.add_term(mask, codec.parse(tj.at("coeff")));
    }
    doc.elem.validate_even();
    return doc;
}

ordered_json clifford_to_json(const CliffordContext& ctx, const CliffordElement& e) {
    ordered_json j;
    ordered_json q = ordered_json::array();
    for (const auto& x : ctx.q) q.push_back(scalar_to_json(x));
    j["q"] = q;
    ordered_json terms = ordered_json::array();
    for (const auto& [mask, coeff] : e.terms) {
        ordered_json term;
        ordered_json subset = ordered_json::array();
        for (int i = 0; i < ctx.n(); ++i)
            if (mask & (uint32_t(1) << i)) subset.push_back(i + 1);
        term["subset"] = subset;
        term["coeff"] = scalar_to_json(coeff);
        terms.push_back(std::move(term));
    }
    j["terms"] = terms;
    return j;
}

PeriodDoc period_from_json(const ordered_json& j) {
    PeriodDoc doc;
    doc.ctx.q = parse_q(j);
    doc.ctx.validate();
    ScalarCodec codec = codec_for(j);

    auto parse_vec = [&](const char* key) {
        require(j.contains(key), std::string("period document needs ") + key);
        require(j.at(key).is_array(), std::string(key) + " must be an array");
        require(static_cast<int>(j.at(key).size()) == doc.ctx.n(),
                std::string(key) + " length must match q");
        SVec v;
        for (const auto& x : j.at(key)) v.push_back(codec.parse(x));
        return v;
    };
    SVec f1 = parse_vec("f1");
    SVec f2 = parse_vec("f2");

    if (codec.float_mode) {
        require(j.contains("eps"), "float mode needs eps");
        mpq_class epsq = parse_rational(j.at("eps"));
        require(epsq > 0, "eps must be positive");
        Scalar eps = Scalar::bigfloat(mpf_class(epsq, codec.precision));
        doc.period = make_k3_period(doc.ctx, std::move(f1), std::move(f2), &eps);
    } else {
        doc.period = make_k3_period(doc.ctx, std::move(f1), std::move(f2));
    }
    return doc;
}

GaloisSetup galois_setup_from_json(const ordered_json& j) {
    require(j.is_object() && j.contains("rank") && j.contains("gram") &&
                j.contains("generators") && j.contains("pic_basis"),
            "setup document needs rank, gram, generators, pic_basis");
    int rank = static_cast<int>(parse_int(j.at("rank")).get_si());
    require(rank >= 1, "rank must be positive");
    ZMat gram = zmat_from_json(j.at("gram"));
    require(gram.rows() == rank && gram.cols() == rank, "gram size does not match rank");

    require(j.at("generators").is_array(), "generators must be an array");
    std::vector<ZMat> gens;
    for (const auto& gj : j.at("generators")) {
        ZMat g = zmat_from_json(gj);
        require(g.rows() == rank && g.cols() == rank, "generator size does not match rank");
        gens.push_back(std::move(g));
    }

    ZMat pic_rows = zmat_from_json(j.at("pic_basis"));
    require(pic_rows.rows() >= 1, "pic_basis must be nonempty");
    require(pic_rows.cols() == rank, "pic_basis width does not match rank");

    GaloisSetup setup;
    setup.H = make_galois_module(rank, std::move(gens), gram);
    setup.pic = SubLattice{pic_rows};
    setup.T = orthogonal_complement(QuadLattice{gram}, setup.pic);
    return setup;
}

ordered_json torus_to_json(const PolarizedTorus& t) {
    ordered_json j;
    j["rank"] = t.rank;
    int n = t.provenance.ctx.n();
    auto [real_dim, complex_dim] = dimension_report(n);
    j["dimension"] = int_str(real_dim);
    j["complex_dimension"] = int_str(complex_dim);
    j["alpha_sign"] = t.alpha_sign;
    j["verified"] = t.verified;
    ordered_json type = ordered_json::array();
    for (const auto& d : polarization_type(t)) type.push_back(int_str(d));
    j["polarization_type"] = type;
    j["complex_structure"] = matrix_to_json(t.complex_structure);
    j["polarization"] = matrix_to_json(t.polarization);
    return j;
}

ordered_json torus_metadata_json(int n) {
    ordered_json j;
    auto [real_dim, complex_dim] = dimension_report(n);
    j["rank"] = int_str(real_dim);
    j["dimension"] = int_str(real_dim);
    j["complex_dimension"] = int_str(complex_dim);
    j["metadata_only"] = true;
    return j;
}

ordered_json picard_report_json(const SubLattice& lat, const QMat& ambient_gram, bool certified) {
    ordered_json j;
    j["rank"] = lat.rank();
    j["generators"] = matrix_to_json(lat.basis);
    QMat bq(lat.rank(), lat.ambient_rank());
    for (int i = 0; i < lat.rank(); ++i)
        for (int t = 0; t < lat.ambient_rank(); ++t) bq(i, t) = mpq_class(lat.basis(i, t));
    QMat g = bq * ambient_gram * bq.transpose();
    j["gram"] = matrix_to_json(g);
    // discriminant of the restricted form; 1 for the zero lattice
    mpq_class disc = 1;
    if (g.rows() > 0) {
        ZMat num(g.rows(), g.cols());
        mpz_class den = 1;
        for (int i = 0; i < g.rows(); ++i)
            for (int t = 0; t < g.cols(); ++t) den = lcm(den, g(i, t).get_den());
        for (int i = 0; i < g.rows(); ++i)
            for (int t = 0; t < g.cols(); ++t) {
                mpq_class scaled = g(i, t) * den;
                num(i, t) = scaled.get_num();
            }
        mpz_class dn;
        mpz_pow_ui(dn.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(g.rows()));
        disc = mpq_class(det_bareiss(num), dn);
        disc.canonicalize();
        if (disc < 0) disc = -disc;
    }
    j["discriminant"] = rat_str(disc);
    j["certified"] = certified;
    return j;
}

ordered_json full_picard_report_json(const FullPicard& fp, const QuadLattice& H) {
    ordered_json j;
    j["rank"] = fp.lattice.rank();
    j["generators"] = matrix_to_json(fp.lattice.basis);
    j["gram"] = matrix_to_json(restricted_gram(H, fp.lattice));
    j["discriminant"] = int_str(fp.disc);
    j["certified"] = fp.certified;
    return j;
}

ordered_json sieve_report_json(const SieveReport& r) {
    ordered_json j;
    j["delta"] = int_str(r.delta);
    ordered_json ex = ordered_json::array();
    for (const auto& p : r.excluded) ex.push_back(int_str(p));
    j["excluded"] = ex;
    j["ell0"] = int_str(r.ell0);
    ordered_json primes = ordered_json::array();
    for (const auto& pr : r.good_primes) {
        ordered_json pj;
        pj["ell"] = int_str(pr.ell);
        pj["t_invariant_order"] = int_str(pr.t_invariant_order);
        pj["brauer_invariant_order"] = int_str(pr.brauer_invariant_order);
        pj["vanishes"] = pr.vanishes;
        primes.push_back(std::move(pj));
    }
    j["good_primes"] = primes;
    return j;
}

ordered_json sequence_report_json(const SequenceReport& r) {
    ordered_json j;
    j["ell"] = int_str(r.ell);
    j["n"] = r.n;
    j["K_order"] = int_str(r.K_order);
    j["C_invariant_order"] = int_str(r.C_invariant_order);
    j["H2_invariant_order"] = int_str(r.H2_invariant_order);
    j["pic_quotient_order"] = int_str(r.pic_quotient_order);
    j["T_invariant_order"] = int_str(r.T_invariant_order);
    j["bound"] = int_str(r.bound);
    j["inequality_holds"] = r.inequality_holds;
    j["injective"] = r.injective;
    j["exact"] = r.exact;
    j["splitting_checked"] = r.splitting_checked;
    return j;
}

} // namespace ks
