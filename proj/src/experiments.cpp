#include "fiq/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include "fiq/digits.hpp"

namespace fiq {

namespace {

constexpr double kLog2e = std::numbers::log2e;

FiqModel seeded(const ExperimentSpec& spec) {
    const auto& src = source_of(spec.model);
    return with_source(spec.model, RandomBitSource(spec.seed, src.bias(), src.stream_id()));
}

std::string pair_label(std::size_t i, std::size_t j) {
    return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

// Cell index: bit 0 = first digit of the pair, bit 1 = second.
template <class Weight>
struct PairTable {
    std::array<Weight, 4> cells{};
    Weight included{};
};

template <class Weight, class Tally>
PairTable<Weight> pair_table(const Tally& tally, std::size_t i, std::size_t j) {
    PairTable<Weight> t;
    for (const auto& [digits, w] : tally) {
        // Digits past the determined frontier are excluded, never imputed.
        if (digits.count() < j) continue;
        const std::size_t cell = digits.fraction_bits[i - 1] | (digits.fraction_bits[j - 1] << 1);
        t.cells[cell] += w;
        t.included += w;
    }
    return t;
}

bool exactly_independent(const std::array<Rational, 4>& p) {
    const Rational a1 = p[1] + p[3];
    const Rational b1 = p[2] + p[3];
    for (std::size_t cell = 0; cell < 4; ++cell) {
        const Rational pa = (cell & 1) ? a1 : 1 - a1;
        const Rational pb = (cell & 2) ? b1 : 1 - b1;
        if (p[cell] != pa * pb) return false;
    }
    return true;
}

double exact_mi(const std::array<Rational, 4>& p) {
    return mutual_information(BitDistribution::exact(std::span<const Rational>(p)));
}

// Delta-method standard deviation of the plug-in MI at sample size n.
double mi_sigma(const std::array<Rational, 4>& p, double n) {
    const auto d = BitDistribution::exact(std::span<const Rational>(p));
    const double a1 = d.probability(1) + d.probability(3);
    const double b1 = d.probability(2) + d.probability(3);
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t cell = 0; cell < 4; ++cell) {
        const double pc = d.probability(cell);
        if (pc <= 0.0) continue;
        const double pa = (cell & 1) ? a1 : 1 - a1;
        const double pb = (cell & 2) ? b1 : 1 - b1;
        const double l = std::log2(pc / (pa * pb));
        m1 += pc * l;
        m2 += pc * l * l;
    }
    return std::sqrt(std::max(m2 - m1 * m1, 0.0) / n);
}

double binomial_bound(double sigma_mult, const Rational& p, double n) {
    const double pd = to_double(p);
    return sigma_mult * std::sqrt(pd * (1.0 - pd) / n);
}

Claim binomial_claim(std::string statement, const Rational& exact, double estimate, double n,
                     double sigma_mult) {
    Claim c;
    c.statement = std::move(statement);
    c.exact = to_string(exact);
    c.estimate = estimate;
    c.bound = binomial_bound(sigma_mult, exact, n);
    c.pass = std::abs(estimate - to_double(exact)) <= *c.bound;
    return c;
}

Claim zero_mi_claim(std::string statement, const MutualInformation& mi) {
    Claim c;
    c.statement = std::move(statement);
    c.exact = 0;
    c.estimate = mi.bits;
    c.bound = mi.threshold;
    c.pass = !mi.significant();
    return c;
}

MutualInformation mi_from_counts(const std::array<std::uint64_t, 4>& cells, double quantile) {
    MutualInformation mi;
    mi.samples = cells[0] + cells[1] + cells[2] + cells[3];
    if (mi.samples == 0) return mi;
    mi.noise_floor = kLog2e / (2.0 * static_cast<double>(mi.samples));
    mi.threshold = quantile * mi.noise_floor;
    mi.bits = mutual_information(
        BitDistribution::from_counts(std::vector<std::uint64_t>(cells.begin(), cells.end())));
    return mi;
}

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

std::string csv_row(std::initializer_list<std::string> cells) {
    std::string out;
    for (const auto& c : cells) {
        if (!out.empty()) out += ',';
        out += c;
    }
    return out + "\n";
}

std::string claims_csv(const std::vector<Claim>& claims) {
    std::string out = "statement,exact,estimate,bound,pass\n";
    for (const auto& c : claims) {
        out += csv_row({"\"" + c.statement + "\"", c.exact.is_null() ? "" : c.exact.dump(),
                        c.estimate ? fmt(*c.estimate) : "", c.bound ? fmt(*c.bound) : "",
                        c.pass ? "1" : "0"});
    }
    return out;
}

void finish(ExperimentVerdict& v) { v.tables["claims.csv"] = claims_csv(v.claims); }

}  // namespace

bool ExperimentVerdict::passed() const {
    return !claims.empty() &&
           std::all_of(claims.begin(), claims.end(), [](const Claim& c) { return c.pass; });
}

ExperimentVerdict run_units_critique(const ExperimentSpec& spec, unsigned threads) {
    const auto* model = std::get_if<IndependentBitsModel>(&spec.model);
    require(model != nullptr, "units experiment needs an independent-bit model");
    require(spec.constant > 0, "scaling constant must be positive");
    require(spec.digit_pairs >= 2, "units experiment needs at least two designated digits");
    if (spec.expect == Expectation::Correlated) {
        require(std::any_of(model->pv.prefix.begin(), model->pv.prefix.end(),
                            [](const Propensity& q) { return !q.is_half(); }),
                "critique run needs at least one prefix propensity other than 1/2");
        require(!power_of_two_exponent(spec.constant).has_value(),
                "a power-of-2 constant only shifts digits and cannot correlate them; "
                "use expect=independent for that control");
    }

    const FiqModel m = seeded(spec);
    const auto exact = scale_fiq_truncated(m, spec.constant, spec.depth, threads);
    const auto sampled = scale_fiq_sampled(m, spec.constant, spec.depth, spec.samples, threads);

    ExperimentVerdict v;
    v.name = spec.name;
    nlohmann::json pairs = nlohmann::json::array();
    std::string joints_csv = "i,j,a,b,exact,exact_float,estimate,count,included\n";
    double max_mi = 0.0;
    bool any_dependent = false;
    std::vector<Claim> cell_claims;
    std::vector<Claim> zero_claims;

    for (std::size_t i = 1; i <= spec.digit_pairs; ++i) {
        for (std::size_t j = i + 1; j <= spec.digit_pairs; ++j) {
            const auto ex = pair_table<Rational>(exact, i, j);
            const auto mc = pair_table<std::uint64_t>(sampled, i, j);
            if (ex.included == 0) continue;
            std::array<Rational, 4> p;
            for (std::size_t c = 0; c < 4; ++c) p[c] = ex.cells[c] / ex.included;
            const bool independent = exactly_independent(p);
            const double mi = independent ? 0.0 : exact_mi(p);
            any_dependent = any_dependent || !independent;
            max_mi = std::max(max_mi, mi);
            const auto mc_mi = mi_from_counts(mc.cells, spec.thresholds.mi_null_quantile);
            const auto n = static_cast<double>(mc.included);

            nlohmann::json cells = nlohmann::json::array();
            for (std::size_t c = 0; c < 4; ++c) {
                const std::size_t a = c & 1, b = c >> 1;
                const double est = mc.included ? static_cast<double>(mc.cells[c]) / n : 0.0;
                cells.push_back({{"a", a}, {"b", b}, {"exact", to_string(p[c])},
                                 {"estimate", est}, {"count", mc.cells[c]}});
                joints_csv += csv_row({std::to_string(i), std::to_string(j), std::to_string(a),
                                       std::to_string(b), to_string(p[c]), fmt(to_double(p[c])),
                                       fmt(est), std::to_string(mc.cells[c]),
                                       std::to_string(mc.included)});
                if (spec.expect == Expectation::Correlated && mc.included > 0) {
                    cell_claims.push_back(binomial_claim(
                        "P(d" + std::to_string(i) + "=" + std::to_string(a) + ", d" +
                            std::to_string(j) + "=" + std::to_string(b) +
                            ") Monte Carlo agrees with exact enumeration",
                        p[c], est, n, spec.thresholds.sigma));
                }
            }
            if (spec.expect == Expectation::Independent) {
                Claim c;
                c.statement = "exact MI of output digits " + pair_label(i, j) + " is 0";
                c.exact = independent ? "0" : fmt(mi);
                c.pass = independent;
                zero_claims.push_back(std::move(c));
                if (mc.included >= 100) {
                    zero_claims.push_back(zero_mi_claim(
                        "thresholded Monte Carlo MI of output digits " + pair_label(i, j) + " is 0",
                        mc_mi));
                }
            }
            pairs.push_back({{"pair", {i, j}},
                             {"exact_mass_included", to_string(ex.included)},
                             {"exact_independent", independent},
                             {"exact_mi", mi},
                             {"mc_included", mc.included},
                             {"mc_mi", mc_mi.bits},
                             {"mc_mi_threshold", mc_mi.threshold},
                             {"cells", cells}});
        }
    }

    if (spec.expect == Expectation::Correlated) {
        Claim c;
        c.statement = "exact MI > 0 for at least one pair among the first " +
                      std::to_string(spec.digit_pairs) + " determined fractional digits";
        c.exact = fmt(max_mi);
        c.pass = any_dependent;
        v.claims.push_back(std::move(c));
        v.claims.insert(v.claims.end(), cell_claims.begin(), cell_claims.end());
    } else {
        v.claims = std::move(zero_claims);
    }

    std::string dist_csv = "int,frac,prob,prob_float\n";
    nlohmann::json dist = nlohmann::json::array();
    for (const auto& [digits, w] : exact) {
        nlohmann::json e = digits;
        dist_csv += csv_row({e["int"].is_null() ? "" : e["int"].dump(),
                             e["frac"].get<std::string>(), to_string(w), fmt(to_double(w))});
    }
    v.report = {{"pairs", pairs},
                {"exact_outcomes", exact.size()},
                {"mc_outcomes", sampled.size()}};
    v.tables["pair_joints.csv"] = joints_csv;
    v.tables["digits_distribution.csv"] = dist_csv;
    finish(v);
    return v;
}

ExperimentVerdict run_majority_study(const ExperimentSpec& spec, unsigned threads) {
    const auto* mv = std::get_if<MajorityVoteModel>(&spec.model);
    require(mv != nullptr, "majority study needs a majority-vote model");
    require(spec.depth >= 2, "majority study needs depth >= 2");
    require(spec.samples >= 100, "majority study needs at least 100 samples");
    const int k = mv->k();
    const Propensity bias = mv->source().bias();
    const FiqModel m = seeded(spec);
    const double sigma = spec.thresholds.sigma;

    const auto rows = sample_rows(m, spec.depth, spec.samples, threads);
    const auto s = SampleMatrix::from_prefixes(rows, pooling_for(m));
    const auto n = static_cast<double>(s.rows());

    ExperimentVerdict v;
    v.name = spec.name;

    // (i) marginals
    const std::uint64_t first[] = {1};
    const Rational p1 = exact_window_joint(k, bias, first)[1];
    const auto props = empirical_propensities(s);
    for (std::size_t c = 0; c < s.cols(); ++c) {
        v.claims.push_back(binomial_claim("marginal propensity of FIQ bit " + std::to_string(c + 1),
                                          p1, props[c].frequency, n, sigma));
    }

    // (ii) adjacent pair
    const std::uint64_t adjacent[] = {1, 2};
    const auto joint = exact_window_joint(k, bias, adjacent);
    const std::array<Rational, 4> pa{joint[0], joint[1], joint[2], joint[3]};
    const std::size_t cols12[] = {0, 1};
    const auto emp = column_distribution(s, cols12);
    v.claims.push_back(binomial_claim("P(b1 == b2)", joint[0] + joint[3],
                                      emp.probability(0) + emp.probability(3), n, sigma));
    const auto mi12 = pairwise_mi(s, 0, 1);
    const bool adjacent_independent = exactly_independent(pa);
    if (adjacent_independent) {
        v.claims.push_back(zero_mi_claim("thresholded MI(b1; b2) is 0", mi12));
    } else {
        Claim c;
        c.statement = "MI(b1; b2) matches exact enumeration";
        const double exact = exact_mi(pa);
        c.exact = fmt(exact);
        // First-order plug-in bias for a 2x2 table is log2(e)/(2N).
        c.estimate = mi12.bits - mi12.noise_floor;
        c.bound = sigma * mi_sigma(pa, n);
        c.pass = std::abs(*c.estimate - exact) <= *c.bound;
        v.claims.push_back(std::move(c));
    }

    // (iii) disjoint windows
    nlohmann::json distances = nlohmann::json::array();
    for (std::size_t dist = static_cast<std::size_t>(k); dist < s.cols(); ++dist) {
        if (dist + static_cast<std::size_t>(k) > kMaxEnumeratedSourceBits) break;
        const std::uint64_t pos[] = {1, 1 + dist};
        const auto jd = exact_window_joint(k, bias, pos);
        Claim c;
        c.statement = "bits at distance " + std::to_string(dist) + " >= k are exactly independent";
        const bool ind = exactly_independent({jd[0], jd[1], jd[2], jd[3]});
        c.exact = ind ? "0" : fmt(exact_mi({jd[0], jd[1], jd[2], jd[3]}));
        c.pass = ind;
        v.claims.push_back(std::move(c));
    }
    std::set<std::pair<std::size_t, std::size_t>> probes;
    if (static_cast<std::size_t>(k) < s.cols()) probes.insert({0, static_cast<std::size_t>(k)});
    if (s.cols() - 1 >= static_cast<std::size_t>(k)) probes.insert({0, s.cols() - 1});
    for (const auto& [i, j] : probes) {
        v.claims.push_back(zero_mi_claim("thresholded MI(b" + std::to_string(i + 1) + "; b" +
                                             std::to_string(j + 1) + ") is 0",
                                         pairwise_mi(s, i, j)));
    }

    // (iv) finitely many generating bits, checked against consumed indices
    bool counts_ok = true;
    for (std::size_t d = 1; d <= spec.depth; ++d) {
        std::set<std::uint64_t> consumed;
        (void)sample_prefix(m, d, [&](std::uint64_t idx) { consumed.insert(idx); });
        const auto expected = generating_bits_count(m, d);
        counts_ok = counts_ok && consumed.size() == expected &&
                    *consumed.begin() == 1 && *consumed.rbegin() == expected &&
                    expected == d + static_cast<std::uint64_t>(k) - 1;
    }
    {
        Claim c;
        c.statement = "generating_bits_count(d) = d + k - 1 matches consumed source indices for d = 1.." +
                      std::to_string(spec.depth);
        c.exact = generating_bits_count(m, spec.depth);
        c.pass = counts_ok;
        v.claims.push_back(std::move(c));
    }

    const auto report = correlation_report(s);
    const auto info = info_report(s, std::min<std::size_t>(8, s.cols()),
                                  generating_bits_count(m, spec.depth));
    v.report = {{"exact",
                 {{"marginal", to_string(p1)},
                  {"adjacent_joint", {to_string(joint[0]), to_string(joint[1]),
                                      to_string(joint[2]), to_string(joint[3])}},
                  {"adjacent_mi", adjacent_independent ? 0.0 : exact_mi(pa)}}},
                {"correlation", report},
                {"info", info}};

    std::string mi_csv;
    for (const auto& row : report.mi_matrix) {
        std::string line;
        for (double x : row) {
            if (!line.empty()) line += ',';
            line += fmt(x);
        }
        mi_csv += line + "\n";
    }
    v.tables["mi_matrix.csv"] = mi_csv;
    finish(v);
    return v;
}

ExperimentVerdict run_units_on_majority(const ExperimentSpec& spec, unsigned threads) {
    const auto* mv = std::get_if<MajorityVoteModel>(&spec.model);
    require(mv != nullptr, "units-on-majority needs a majority-vote model");
    require(spec.constant > 0, "scaling constant must be positive");
    require(spec.depth >= 1, "units-on-majority needs depth >= 1");
    const FiqModel m = seeded(spec);
    const Rational& c = spec.constant;
    const auto shift = power_of_two_exponent(c);

    const auto rows = sample_rows(m, spec.depth, spec.samples, threads);
    const auto input = SampleMatrix::from_prefixes(rows, pooling_for(m));

    // Digits every row is expected to carry: c·2^-d is the output width.
    const Rational width = c * pow2(-static_cast<int>(spec.depth));
    long m_out = -floor_log2(width);
    if (!shift) --m_out;
    const std::size_t out_cols =
        static_cast<std::size_t>(std::clamp<long>(m_out, 0, static_cast<long>(kMaxBlockLength)));

    std::vector<DeterminedDigits> digits(rows.size());
    std::vector<std::uint8_t> unsound(rows.size(), 0);
    parallel_rows(rows.size(), threads, [&](std::size_t r) {
        const auto x = scale_by_constant(prefix_to_interval(rows[r]), c);
        digits[r] = determined_digits(x);
        const auto& d = digits[r];
        // Spot-check against exact digits of three points of the interval.
        const Rational points[] = {x.low(), (x.low() + x.high()) / 2,
                                   x.high() - x.width() / 1024};
        for (const auto& z : points) {
            const auto exact = digits_of_point(z, d.count());
            if ((d.integer_part && *d.integer_part != *exact.integer_part) ||
                d.fraction_bits != exact.fraction_bits) {
                unsound[r] = 1;
            }
        }
    });

    ExperimentVerdict v;
    v.name = spec.name;
    const auto violations = std::count(unsound.begin(), unsound.end(), 1);
    {
        Claim cl;
        cl.statement = "every emitted digit agrees with exact rational recomputation on the realized prefix";
        cl.exact = violations;
        cl.pass = violations == 0;
        v.claims.push_back(std::move(cl));
    }

    std::vector<std::uint8_t> kept;
    std::size_t kept_rows = 0;
    for (const auto& d : digits) {
        if (d.count() < out_cols) continue;
        kept.insert(kept.end(), d.fraction_bits.begin(),
                    d.fraction_bits.begin() + static_cast<long>(out_cols));
        ++kept_rows;
    }
    const Pooling out_pooling = shift ? input.pooling() : Pooling::PerPosition;

    auto describe = [](const SampleMatrix& s) -> nlohmann::json {
        if (s.rows() == 0 || s.cols() == 0) return nullptr;
        return {{"correlation", correlation_report(s)},
                {"candidates", correlated_info_content(s, std::min(s.cols(), kMaxBlockLength))}};
    };
    const std::size_t in_cols = std::min(input.cols(), kMaxBlockLength);
    std::vector<std::uint8_t> in_data;
    for (std::size_t r = 0; r < input.rows(); ++r) {
        for (std::size_t col = 0; col < in_cols; ++col) in_data.push_back(input.at(r, col));
    }
    const SampleMatrix before(input.rows(), in_cols, std::move(in_data), input.pooling());
    const SampleMatrix after(kept_rows, out_cols, std::move(kept), out_pooling);
    const auto before_report = describe(before);
    const auto after_report = describe(after);

    if (shift) {
        const int e = *shift;
        bool shifted = true;
        for (std::size_t r = 0; r < rows.size() && shifted; ++r) {
            const auto& bits = rows[r].bits;
            DeterminedDigits expect;
            BigInt integer = 0;
            std::size_t pos = 0;
            for (; e > 0 && pos < static_cast<std::size_t>(e) && pos < bits.size(); ++pos) {
                integer = integer * 2 + bits[pos];
            }
            for (std::size_t z = pos; z < static_cast<std::size_t>(e); ++z) integer *= 2;
            expect.integer_part = integer;
            for (int z = 0; z < -e; ++z) expect.fraction_bits.push_back(0);
            expect.fraction_bits.insert(expect.fraction_bits.end(),
                                        bits.begin() + static_cast<long>(pos), bits.end());
            shifted = digits[r] == expect;
        }
        Claim cl;
        cl.statement = "power-of-2 constant shifts the digit sequence by " + std::to_string(e) +
                       " positions";
        cl.exact = e;
        cl.pass = shifted;
        v.claims.push_back(std::move(cl));
        if (e == 0) {
            Claim id;
            id.statement = "identity constant leaves the reports unchanged";
            id.exact = true;
            id.pass = before_report == after_report;
            v.claims.push_back(std::move(id));
        }
    }

    v.report = {{"output_digits", out_cols},
                {"rows_kept", kept_rows},
                {"rows_total", rows.size()},
                {"before", before_report},
                {"after", after_report}};
    finish(v);
    return v;
}

ExperimentVerdict run_experiment(const ExperimentSpec& spec, unsigned threads) {
    switch (spec.kind) {
        case ExperimentKind::Units:
            return run_units_critique(spec, threads);
        case ExperimentKind::Majority:
            return run_majority_study(spec, threads);
        case ExperimentKind::UnitsOnMajority:
            return run_units_on_majority(spec, threads);
    }
    throw std::logic_error("unknown experiment kind");
}

std::vector<std::string> preset_names(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Units:
            return {"biased-x3", "biased-x10", "biased-yards", "uniform-x3", "biased-half"};
        case ExperimentKind::Majority:
            return {"k3", "k1", "k5"};
        case ExperimentKind::UnitsOnMajority:
            return {"k3-x3", "k3-x1", "k3-x2"};
    }
    return {};
}

ExperimentSpec preset(ExperimentKind kind, const std::string& name) {
    ExperimentSpec s;
    s.kind = kind;
    s.name = kind_name(kind) + "/" + name;
    const auto biased = [](std::size_t n) {
        PropensityVector pv;
        pv.prefix.assign(n, Propensity(Rational(3, 4)));
        return IndependentBitsModel{pv, RandomBitSource(0)};
    };
    const auto majority = [](int k) { return MajorityVoteModel(k, RandomBitSource(0)); };

    if (kind == ExperimentKind::Units) {
        s.depth = 12;
        s.samples = 100000;
        if (name == "biased-x3" || name == "biased-x10" || name == "biased-yards") {
            // With two biased bits, 10·Q has exactly independent leading
            // digits; four are needed for the effect to reach them.
            s.model = biased(name == "biased-x10" ? 4 : 2);
            s.constant = name == "biased-x3" ? Rational(3)
                         : name == "biased-x10" ? Rational(10)
                                                : Rational(1143, 1250);
            s.expect = Expectation::Correlated;
            return s;
        }
        if (name == "uniform-x3") {
            s.model = IndependentBitsModel{PropensityVector{}, RandomBitSource(0)};
            s.constant = 3;
            s.expect = Expectation::Independent;
            return s;
        }
        if (name == "biased-half") {
            s.model = biased(1);
            s.constant = Rational(1, 2);
            s.expect = Expectation::Independent;
            return s;
        }
    } else if (kind == ExperimentKind::Majority) {
        s.depth = 16;
        s.samples = 100000;
        if (name == "k3" || name == "k1" || name == "k5") {
            s.model = majority(name[1] - '0');
            return s;
        }
    } else {
        s.depth = 12;
        s.samples = 10000;
        s.model = majority(3);
        if (name == "k3-x3" || name == "k3-x1" || name == "k3-x2") {
            s.constant = name.back() - '0';
            return s;
        }
    }
    throw std::invalid_argument("unknown preset '" + name + "' for experiment " + kind_name(kind));
}

ExperimentKind parse_kind(const std::string& text) {
    if (text == "units") return ExperimentKind::Units;
    if (text == "majority") return ExperimentKind::Majority;
    if (text == "units-majority") return ExperimentKind::UnitsOnMajority;
    throw std::invalid_argument("unknown experiment '" + text +
                                "' (expected units, majority or units-majority)");
}

std::string kind_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Units:
            return "units";
        case ExperimentKind::Majority:
            return "majority";
        case ExperimentKind::UnitsOnMajority:
            return "units-majority";
    }
    return "?";
}

void to_json(nlohmann::json& j, const ExperimentSpec& spec) {
    nlohmann::json model = seeded(spec);
    j = nlohmann::json{{"name", spec.name},
                       {"kind", kind_name(spec.kind)},
                       {"model", model},
                       {"constant", to_string(spec.constant)},
                       {"depth", spec.depth},
                       {"samples", spec.samples},
                       {"seed", spec.seed},
                       {"expect", spec.expect == Expectation::Correlated ? "correlated"
                                                                         : "independent"},
                       {"thresholds", {{"sigma", spec.thresholds.sigma},
                                       {"mi_null_quantile", spec.thresholds.mi_null_quantile}}},
                       {"digit_pairs", spec.digit_pairs}};
}

ExperimentSpec spec_from_json(const nlohmann::json& j) {
    require(j.is_object(), "experiment spec must be a JSON object");
    ExperimentSpec s;
    s.kind = parse_kind(j.value("kind", std::string()));
    s.name = j.value("name", kind_name(s.kind));
    require(j.contains("model"), "experiment spec needs a \"model\"");
    s.model = model_from_json(j.at("model"));
    s.constant = parse_rational(j.value("constant", std::string("1")));
    s.depth = j.value<std::size_t>("depth", s.depth);
    s.samples = j.value<std::size_t>("samples", s.samples);
    s.seed = j.contains("seed") ? j.at("seed").get<std::uint64_t>() : source_of(s.model).seed();
    const auto expect = j.value("expect", std::string("correlated"));
    require(expect == "correlated" || expect == "independent",
            "expect must be \"correlated\" or \"independent\"");
    s.expect = expect == "correlated" ? Expectation::Correlated : Expectation::Independent;
    if (j.contains("thresholds")) {
        const auto& t = j.at("thresholds");
        s.thresholds.sigma = t.value("sigma", s.thresholds.sigma);
        s.thresholds.mi_null_quantile = t.value("mi_null_quantile", s.thresholds.mi_null_quantile);
    }
    s.digit_pairs = j.value<std::size_t>("digit_pairs", s.digit_pairs);
    return s;
}

void to_json(nlohmann::json& j, const Claim& c) {
    j = nlohmann::json{{"statement", c.statement},
                       {"exact", c.exact},
                       {"estimate", c.estimate ? nlohmann::json(*c.estimate) : nlohmann::json()},
                       {"bound", c.bound ? nlohmann::json(*c.bound) : nlohmann::json()},
                       {"pass", c.pass}};
}

void to_json(nlohmann::json& j, const ExperimentVerdict& v) {
    j = nlohmann::json{{"name", v.name},
                       {"passed", v.passed()},
                       {"claims", v.claims},
                       {"artifacts", v.artifacts},
                       {"report", v.report}};
}

}  // namespace fiq
