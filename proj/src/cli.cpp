#include "rescale/cli.hpp"

#include "rescale/families.hpp"
#include "rescale/ingest.hpp"
#include "rescale/model_io.hpp"
#include "rescale/plot.hpp"
#include "rescale/verify.hpp"

#include "CLI11.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace rescale::cli {

namespace {

class IoError : public Error {
public:
    using Error::Error;
};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) return {};
    return s.substr(first, s.find_last_not_of(" \t") - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) return parts;
        start = pos + 1;
    }
}

double parse_double(std::string_view text) {
    auto t = trim(text);
    if (!t.empty() && t.front() == '+') t.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
        throw UsageError("not a number: '" + std::string(text) + "'");
    return v;
}

PointSet load_points(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    return read_points_csv(in);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Writes to `path`, or to `out` when path is "-".
template <class Writer>
void emit(const std::string& path, std::ostream& out, Writer&& write) {
    if (path == "-") {
        write(out);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot write '" + path + "'");
    write(file);
    if (!file) throw IoError("error while writing '" + path + "'");
}

std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

// --- commands ---------------------------------------------------------------

struct FitArgs {
    std::string family;
    std::string mean;
    std::string input;
    std::string output = "-";
};

int cmd_fit(const FitArgs& a, std::ostream& out) {
    const auto kind = parse_family(a.family);
    if (!kind) throw UsageError("unknown family '" + a.family + "'");
    if (has_fixed_mean(*kind) && a.mean.empty())
        throw UsageError("family '" + a.family + "' requires --mean");
    if (!has_fixed_mean(*kind) && !a.mean.empty())
        throw UsageError("family '" + a.family + "' does not take --mean");

    const PointSet points = load_points(a.input);
    const Moments mom = estimate_moments(points);
    std::optional<Vector> fixed;
    if (has_fixed_mean(*kind)) fixed = resolve_mean(a.mean, mom.mean);
    const FitResult result = fit(mom, FamilySpec(*kind, fixed));
    const std::string doc = serialize_model(make_document(result));
    emit(a.output, out, [&](std::ostream& s) { s << doc; });
    return kOk;
}

int cmd_score(const std::string& model_path, const std::string& input, std::ostream& out) {
    const ModelDocument doc = parse_model(slurp(model_path));
    const PointSet points = load_points(input);
    if (points.dim() != doc.dim) throw InvalidInput("data dimension differs from the model's");
    const Moments mom = estimate_moments(points);
    const GaussianModel model = doc.model();
    out << "match " << format_double(match_score(mom, model)) << '\n';
    out << "cross_entropy " << format_double(cross_entropy(mom, model)) << '\n';
    out << "self_cross_entropy " << format_double(self_cross_entropy(mom)) << '\n';
    return kOk;
}

int cmd_transform(const std::string& model_path, const std::string& input, const std::string& output,
                  const std::string& plot, std::ostream& out) {
    const ModelDocument doc = parse_model(slurp(model_path));
    const PointSet points = load_points(input);
    if (points.dim() != doc.dim) throw InvalidInput("data dimension differs from the model's");
    const PointSet mapped = whitening_transform(doc.model()).apply(points);
    emit(output, out, [&](std::ostream& s) { write_points_csv(s, mapped); });
    if (!plot.empty()) {
        const std::string svg = scatter_svg(mapped);
        emit(plot, out, [&](std::ostream& s) { s << svg; });
    }
    return kOk;
}

int cmd_report(const std::string& input, const std::string& means_arg, const std::string& format,
               std::ostream& out) {
    if (format != "text" && format != "csv") throw UsageError("--format must be 'text' or 'csv'");
    const PointSet points = load_points(input);
    const Moments mom = estimate_moments(points);

    std::vector<std::string> labels;
    std::vector<Vector> means;
    if (!means_arg.empty()) {
        for (auto tok : split(means_arg, ';')) {
            tok = trim(tok);
            if (tok.empty()) throw UsageError("empty entry in --means");
            labels.emplace_back(tok);
            means.push_back(resolve_mean(tok, mom.mean));
        }
    }
    const auto rows = family_report(mom, means);

    if (format == "csv") {
        out << "family,mean,match,cross_entropy\n";
        for (const auto& r : rows) {
            out << family_name(r.family) << ',' << (r.mean_index ? labels[*r.mean_index] : "") << ','
                << format_double(r.match) << ',' << format_double(r.cross_entropy) << '\n';
        }
        return kOk;
    }

    constexpr std::size_t w = 24;
    out << "dataset: n=" << points.size() << " dim=" << points.dim() << '\n';
    out << "self cross-entropy: " << format_double(self_cross_entropy(mom)) << "\n\n";
    out << pad("family", w) << pad("M(Y||F)", w) << "H(Y||F)\n";
    for (const auto& r : rows) {
        if (r.mean_index) continue;
        out << pad(std::string(family_name(r.family)), w) << pad(format_double(r.match), w)
            << format_double(r.cross_entropy) << '\n';
    }
    if (means.empty()) return kOk;

    // Grid: one line per mean, one column per fixed-mean family.
    const std::array<FamilyKind, 3> cols = {FamilyKind::FixedMean, FamilyKind::FixedMeanDiagonal,
                                            FamilyKind::FixedMeanIsotropic};
    out << '\n' << pad("mean", w);
    for (auto k : cols) out << pad(std::string(family_name(k)), w);
    out << '\n';
    for (std::size_t i = 0; i < means.size(); ++i) {
        out << pad(labels[i], w);
        for (auto k : cols) {
            for (const auto& r : rows)
                if (r.family == k && r.mean_index == i) out << pad(format_double(r.match), w);
        }
        out << '\n';
    }
    return kOk;
}

int cmd_image_blocks(const std::string& input, const std::string& output, int block, std::ostream& out) {
    std::ifstream in(input, std::ios::binary);
    if (!in) throw IoError("cannot open '" + input + "'");
    const ImageBlocks blocks = image_to_blocks(read_ppm(in), block);
    const PointSet points = blocks.to_point_set();
    emit(output, out, [&](std::ostream& s) { write_points_csv(s, points); });
    return kOk;
}

int cmd_synth(const std::string& mean_arg, const std::string& cov_arg, long n, std::uint64_t seed,
              const std::string& output, std::ostream& out) {
    const Vector mean = parse_vector(mean_arg);
    const Matrix cov = parse_matrix(cov_arg);
    if (cov.rows() != mean.size()) throw UsageError("--cov must be " + std::to_string(mean.size()) + "x" +
                                                    std::to_string(mean.size()));
    if (n < 2) throw UsageError("--n must be at least 2");
    const PointSet points = sample_gaussian(mean, SymMatrix(cov), n, seed);
    emit(output, out, [&](std::ostream& s) { write_points_csv(s, points); });
    return kOk;
}

int cmd_verify(const std::string& dims, int trials, std::uint64_t seed, int restarts, std::ostream& out) {
    VerifyOptions opts;
    const auto [lo, hi] = parse_range(dims);
    if (lo < 1 || hi > 8) throw UsageError("--dims must lie within 1..8");
    if (trials < 1) throw UsageError("--trials must be positive");
    if (restarts < 1) throw UsageError("--restarts must be positive");
    opts.min_dim = lo;
    opts.max_dim = hi;
    opts.trials = trials;
    opts.seed = seed;
    opts.oracle.restarts = restarts;

    const VerifyReport report = run_verification(opts);
    out << "verify: dims " << lo << ".." << hi << ", " << trials << " trials, seed " << seed << '\n';
    constexpr std::size_t w = 24;
    out << pad("family", w) << pad("failures", 10) << pad("max |closed-oracle|", w) << "max (closed-oracle)\n";
    for (const auto& f : report.families) {
        out << pad(std::string(family_name(f.family)), w)
            << pad(std::to_string(f.failures) + "/" + std::to_string(f.trials), 10) << pad(format_double(f.max_abs_diff), w)
            << format_double(f.max_oracle_advantage) << '\n';
    }
    out << "nesting: " << report.nesting_violations << " violations in " << report.nesting_checks << " datasets\n";
    for (const auto& e : report.errors) out << "  " << e << '\n';
    out << (report.passed() ? "PASS" : "FAIL") << '\n';
    return report.passed() ? kOk : kVerifyFailed;
}

}  // namespace

Vector parse_vector(std::string_view text) {
    const auto parts = split(trim(text), ',');
    Vector v(static_cast<Eigen::Index>(parts.size()));
    for (std::size_t i = 0; i < parts.size(); ++i) v(static_cast<Eigen::Index>(i)) = parse_double(parts[i]);
    return v;
}

Matrix parse_matrix(std::string_view text) {
    const auto rows = split(trim(text), ';');
    Matrix m;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Vector r = parse_vector(rows[i]);
        if (i == 0) m.resize(static_cast<Eigen::Index>(rows.size()), r.size());
        if (r.size() != m.cols()) throw UsageError("matrix rows have different lengths");
        m.row(static_cast<Eigen::Index>(i)) = r.transpose();
    }
    if (m.rows() != m.cols()) throw UsageError("matrix must be square");
    return m;
}

Vector resolve_mean(std::string_view token, const Vector& data_mean) {
    token = trim(token);
    if (token == "mean") return data_mean;
    if (token.find(',') == std::string_view::npos)
        return Vector::Constant(data_mean.size(), parse_double(token));
    Vector v = parse_vector(token);
    if (v.size() != data_mean.size())
        throw UsageError("mean '" + std::string(token) + "' has " + std::to_string(v.size()) +
                         " entries, data has dimension " + std::to_string(data_mean.size()));
    return v;
}

std::pair<long, long> parse_range(std::string_view text) {
    text = trim(text);
    auto to_long = [&](std::string_view s) {
        long v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
            throw UsageError("invalid range '" + std::string(text) + "'");
        return v;
    };
    const auto dots = text.find("..");
    if (dots == std::string_view::npos) {
        const long v = to_long(text);
        return {v, v};
    }
    const long lo = to_long(text.substr(0, dots));
    const long hi = to_long(text.substr(dots + 2));
    if (hi < lo) throw UsageError("invalid range '" + std::string(text) + "'");
    return {lo, hi};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Optimal Gaussian rescaling of datasets within constrained families"};
    app.require_subcommand(1);

    FitArgs fit_args;
    auto* fit_cmd = app.add_subcommand("fit", "Fit the optimal Gaussian within a family");
    fit_cmd->add_option("--family", fit_args.family,
                        "full | fixed-mean | isotropic | fixed-mean-isotropic | diagonal | fixed-mean-diagonal")
        ->required();
    fit_cmd->add_option("--mean", fit_args.mean, "Fixed mean: v1,v2,... | scalar (broadcast) | 'mean'");
    fit_cmd->add_option("--input", fit_args.input, "Input CSV")->required();
    fit_cmd->add_option("--output", fit_args.output, "Model JSON ('-' for stdout)");

    std::string model_path, input, output = "-", plot, means, format = "text", mean_arg, cov_arg,
                                   dims = "1..4";
    long n = 0;
    std::uint64_t seed = 0;
    int trials = 50;
    int restarts = 3;
    int block = 8;

    auto* score_cmd = app.add_subcommand("score", "Match score and cross-entropy of data against a model");
    score_cmd->add_option("--model", model_path, "Model JSON")->required();
    score_cmd->add_option("--input", input, "Input CSV")->required();

    auto* transform_cmd = app.add_subcommand("transform", "Apply y -> Sigma^{-1/2}(y - m)");
    transform_cmd->add_option("--model", model_path, "Model JSON")->required();
    transform_cmd->add_option("--input", input, "Input CSV")->required();
    transform_cmd->add_option("--output", output, "Output CSV ('-' for stdout)");
    transform_cmd->add_option("--plot", plot, "Also write an SVG scatter of the first two coordinates");

    auto* report_cmd = app.add_subcommand("report", "M and H for all six families");
    report_cmd->add_option("--input", input, "Input CSV")->required();
    report_cmd->add_option("--means", means, "Fixed means separated by ';' (each: vector, scalar or 'mean')");
    report_cmd->add_option("--format", format, "text | csv");

    auto* blocks_cmd = app.add_subcommand("image-blocks", "Split a PPM image into block vectors");
    blocks_cmd->add_option("--input", input, "Binary PPM (P6)")->required();
    blocks_cmd->add_option("--output", output, "Output CSV ('-' for stdout)");
    blocks_cmd->add_option("--block", block, "Block edge in pixels")->check(CLI::PositiveNumber);

    auto* synth_cmd = app.add_subcommand("synth", "Seeded Gaussian sample");
    synth_cmd->add_option("--mean", mean_arg, "Mean vector v1,v2,...")->required();
    synth_cmd->add_option("--cov", cov_arg, "Covariance rows separated by ';'")->required();
    synth_cmd->add_option("--n", n, "Number of points")->required();
    synth_cmd->add_option("--seed", seed, "Generator seed");
    synth_cmd->add_option("--output", output, "Output CSV ('-' for stdout)");

    auto* verify_cmd = app.add_subcommand("verify", "Closed forms vs numerical oracle on random datasets");
    verify_cmd->add_option("--dims", dims, "Dimension range a..b");
    verify_cmd->add_option("--trials", trials, "Number of datasets");
    verify_cmd->add_option("--seed", seed, "Seed")->default_val(1);
    verify_cmd->add_option("--restarts", restarts, "Oracle restarts per fit");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (fit_cmd->parsed()) return cmd_fit(fit_args, out);
        if (score_cmd->parsed()) return cmd_score(model_path, input, out);
        if (transform_cmd->parsed()) return cmd_transform(model_path, input, output, plot, out);
        if (report_cmd->parsed()) return cmd_report(input, means, format, out);
        if (blocks_cmd->parsed()) return cmd_image_blocks(input, output, block, out);
        if (synth_cmd->parsed()) return cmd_synth(mean_arg, cov_arg, n, seed, output, out);
        if (verify_cmd->parsed()) return cmd_verify(dims, trials, seed, restarts, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    }
    return kUsage;
}

}  // namespace rescale::cli
