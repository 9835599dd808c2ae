/*
   Copyright 2026 The wohs Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "wohs/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "wohs/errors.hpp"
#include "wohs/kernels.hpp"
#include "wohs/samplers.hpp"
#include "wohs/stats.hpp"
#include "wohs/suites.hpp"
#include "wohs/walk.hpp"

namespace wohs {

namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 20240917;

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(s);
    while (std::getline(is, cell, sep)) out.push_back(trim(cell));
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

// Strict decimal parse; nullopt on anything but a complete number.
std::optional<double> to_double(const std::string& s)
{
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) return std::nullopt;
    return v;
}

std::vector<double> parse_list(const std::string& s, const std::string& what)
{
    std::vector<double> out;
    for (const std::string& cell : split(s, ',')) {
        const auto v = to_double(cell);
        if (!v) throw UsageError(what + ": '" + s + "' is not a comma-separated list of numbers");
        out.push_back(*v);
    }
    if (out.empty()) throw UsageError(what + " is empty");
    return out;
}

PointXd parse_point(const std::string& s, int dim, const std::string& what)
{
    const std::vector<double> v = parse_list(s, what);
    if (static_cast<int>(v.size()) != dim) {
        throw UsageError(what + " has " + std::to_string(v.size()) + " coordinates, expected " + std::to_string(dim));
    }
    return Eigen::Map<const PointXd>(v.data(), dim);
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag)
{
    if (flag) return *flag;
    if (const char* env = std::getenv("WOHS_SEED"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (*end != '\0' || env[0] == '-') throw UsageError(std::string("WOHS_SEED is not an unsigned integer: ") + env);
        return v;
    }
    return kDefaultSeed;
}

/// Output target: a file, or the caller's stream for "-".
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : os_(&fallback)
    {
        if (path == "-") return;
        file_.open(path, std::ios::binary);
        if (!file_) throw std::runtime_error("cannot open " + path + " for writing");
        os_ = &file_;
    }
    std::ostream& get() { return *os_; }
    void close()
    {
        os_->flush();
        if (file_.is_open()) file_.close();
        if (!*os_ && os_ != &file_) throw std::runtime_error("write failed");
    }

private:
    std::ofstream file_;
    std::ostream* os_;
};

template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn)
{
    const std::size_t w = std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(workers), n));
    std::vector<std::exception_ptr> errors(w);
    auto run = [&](std::size_t s) {
        try {
            for (std::size_t i = n * s / w; i < n * (s + 1) / w; ++i) fn(i);
        } catch (...) {
            errors[s] = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t s = 1; s < w; ++s) pool.emplace_back(run, s);
    run(0);
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

// Config files are JSON objects with flat keys named after the long flags of
// the chosen subcommand. Arrays are joined with commas, so "start": [2, 0]
// reads as --start 2,0.
class JsonConfig : public CLI::Config {
public:
    explicit JsonConfig(std::string section) : section_(std::move(section)) {}

    std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override
    {
        json j = json::object();
        for (const CLI::Option* opt : app->get_options()) {
            const std::string name = opt->get_single_name();
            if (name.empty() || !opt->get_configurable()) continue;
            if (opt->count() > 0) j[name] = CLI::detail::join(opt->results(), ",");
            else if (default_also && !opt->get_default_str().empty()) j[name] = opt->get_default_str();
        }
        return j.dump(2) + "\n";
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& is) const override
    {
        json j;
        try {
            j = json::parse(is);
        } catch (const json::parse_error& e) {
            throw CLI::ConversionError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!j.is_object()) throw CLI::ConversionError("config must be a JSON object");
        std::vector<CLI::ConfigItem> items;
        for (const auto& [key, value] : j.items()) {
            CLI::ConfigItem item;
            if (!section_.empty()) item.parents = {section_};
            item.name = key;
            if (value.is_array()) {
                std::vector<std::string> parts;
                for (const json& e : value) parts.push_back(scalar(key, e));
                item.inputs = {CLI::detail::join(parts, ",")};
            } else {
                item.inputs = {scalar(key, value)};
            }
            items.push_back(std::move(item));
        }
        return items;
    }

private:
    static std::string scalar(const std::string& key, const json& v)
    {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
        if (v.is_number_float()) return num(v.get<double>());
        throw CLI::ConversionError("config key '" + key + "' must be a string, number, boolean or flat array");
    }

    std::string section_;
};

// ---------------------------------------------------------------------------

struct RunOptions {
    double alpha = 1.5;
    int dim = 2;
    std::string start;
    std::string measure = "plain";
    std::size_t n = 1000;
    std::optional<std::uint64_t> seed;
    int workers = 1;
    std::string out = "-";
};

void add_run_options(CLI::App* sub, RunOptions& o)
{
    sub->add_option("--alpha", o.alpha, "Stability index in (0,2)")->required();
    sub->add_option("--dim", o.dim, "Dimension")->capture_default_str();
    sub->add_option("--start", o.start, "Start point x1,x2,...")->required();
    sub->add_option("--measure", o.measure, "plain or conditioned")
        ->check(CLI::IsMember({"plain", "conditioned"}))
        ->capture_default_str();
    sub->add_option("--n", o.n, "Number of draws")->capture_default_str();
    sub->add_option("--seed", o.seed, "Master seed (default: WOHS_SEED, then 20240917)");
    sub->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--out", o.out, "Output file, - for stdout")->capture_default_str();
}

// ---------------------------------------------------------------------------
// sample

struct SampleOptions : RunOptions {
    double barrier = 0.0;
    std::string direction = "down";
};

int cmd_sample(const SampleOptions& o, std::ostream& out)
{
    const StableParams p(o.alpha, o.dim);
    const PointXd x = parse_point(o.start, o.dim, "--start");
    const Barrier b{o.barrier, o.direction == "down" ? Direction::Down : Direction::Up};
    const bool conditioned = o.measure == "conditioned";
    std::optional<ConditionedSamplerCache> cache;
    SlabFace face = SlabFace::Plus;
    if (conditioned) {
        if (!(o.alpha < 1.0)) throw DomainError("the conditioned measure needs alpha in (0,1)");
        if (o.barrier == 1.0 && b.direction == Direction::Down) face = SlabFace::Plus;
        else if (o.barrier == -1.0 && b.direction == Direction::Up) face = SlabFace::Minus;
        else throw UsageError("conditioned draws cross a slab face: --barrier 1 --direction down or --barrier -1 --direction up");
        cache.emplace(o.alpha);
    }
    if (!(barrier_gap(x(0), b) > 0.0)) throw DomainError("start must lie strictly on the near side of the barrier");
    const std::uint64_t seed = resolve_seed(o.seed);

    std::vector<PointXd> ys(o.n);
    std::vector<double> ws(o.n, 1.0);
    parallel_for(o.n, o.workers, [&](std::size_t i) {
        RngStream first(seed, i, 0), transverse(seed, i, 1);
        if (!conditioned) {
            ys[i] = overshoot_point(x, b, p, first, transverse);
            return;
        }
        PointXd y = x;
        y(0) = overshoot_first_coord_conditioned(x(0), face, o.alpha, *cache, first);
        if (o.dim > 1) y.tail(o.dim - 1) += mv_cauchy(std::abs(x(0) - y(0)), o.dim - 1, transverse);
        ws[i] = std::pow(std::abs(y(0)) / std::abs(x(0)), 1.0 - o.alpha);
        ys[i] = std::move(y);
    });

    Sink sink(o.out, out);
    std::ostream& os = sink.get();
    os << "sample_id";
    for (int k = 1; k <= o.dim; ++k) os << ",y" << k;
    os << ",weight\n";
    for (std::size_t i = 0; i < o.n; ++i) {
        os << i;
        for (int k = 0; k < o.dim; ++k) os << ',' << num(ys[i](k));
        os << ',' << num(ws[i]) << '\n';
    }
    sink.close();
    return kExitOk;
}

// ---------------------------------------------------------------------------
// walk

struct WalkOptions : RunOptions {
    std::string mode = "collapsed";
    std::int64_t max_crossings = 0;
    std::string trace;
    std::string format = "csv";
};

const char* status_name(WalkStatus s) { return s == WalkStatus::Entered ? "Entered" : "CapReached"; }

int cmd_walk(const WalkOptions& o, std::ostream& out)
{
    WalkConfig c;
    c.params = StableParams(o.alpha, o.dim);
    c.start = parse_point(o.start, o.dim, "--start");
    c.measure = o.measure == "conditioned" ? Measure::Conditioned : Measure::Plain;
    c.mode = o.mode == "full" ? WalkMode::FullTrace : WalkMode::Collapsed;
    c.max_crossings = o.max_crossings;
    c.record_trace = !o.trace.empty();
    const bool conditioned = c.measure == Measure::Conditioned;

    const WalkDataset ds = batch_walk(c, o.n, o.workers, resolve_seed(o.seed));
    if (ds.results.size() < ds.requested) throw std::runtime_error("out of memory after " + std::to_string(ds.results.size()) + " walks");

    auto weight = [&](const WalkResult& r) {
        if (r.status == WalkStatus::Entered) return r.weight;
        return conditioned ? 0.0 : 1.0;
    };
    Sink sink(o.out, out);
    std::ostream& os = sink.get();
    if (o.format == "csv") {
        os << "sample_id,status,n_crossings,weight";
        for (int k = 1; k <= o.dim; ++k) os << ",y" << k;
        os << '\n';
        for (std::size_t i = 0; i < ds.results.size(); ++i) {
            const WalkResult& r = ds.results[i];
            os << i << ',' << status_name(r.status) << ',' << r.n_crossings << ',' << num(weight(r));
            for (int k = 0; k < o.dim; ++k) {
                os << ',';
                if (r.final_point) os << num((*r.final_point)(k));
            }
            os << '\n';
        }
    } else {
        for (std::size_t i = 0; i < ds.results.size(); ++i) {
            const WalkResult& r = ds.results[i];
            json j = {{"sample_id", i}, {"status", status_name(r.status)}, {"n_crossings", r.n_crossings},
                      {"weight", weight(r)}};
            j["final"] = r.final_point ? json(std::vector<double>(r.final_point->data(), r.final_point->data() + o.dim))
                                       : json(nullptr);
            os << j.dump() << '\n';
        }
    }
    sink.close();

    if (!o.trace.empty()) {
        Sink ts(o.trace, out);
        for (std::size_t i = 0; i < ds.results.size(); ++i) {
            for (const CrossingEvent& ev : ds.results[i].trace) {
                json j = {{"sample_id", i}, {"k", ev.k}, {"face", static_cast<int>(ev.face)}, {"x1", ev.x1}};
                if (ev.transverse) j["transverse"] = std::vector<double>(ev.transverse->data(), ev.transverse->data() + ev.transverse->size());
                ts.get() << j.dump() << '\n';
            }
        }
        ts.close();
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// density

struct DensityOptions {
    std::string kernel;
    double alpha = 1.5;
    int dim = 2;
    std::map<std::string, std::string> points;  // flag name -> comma list
    std::optional<double> radius;
    std::string face = "plus";
    double barrier = 0.0;
    std::string direction = "down";
    std::string points_file;
    std::string out = "-";
};

struct KernelArgs {
    std::vector<std::string> vectors;
    bool radius = false;
};

const std::map<std::string, KernelArgs>& kernel_table()
{
    static const std::map<std::string, KernelArgs> t{
        {"pcr", {{"x", "y"}}},          {"triple", {{"x", "w", "y", "z"}}}, {"double", {{"x", "y", "z"}}},
        {"overshoot", {{"x", "z"}}},    {"overshoot-cond", {{"x", "y"}}},   {"green", {{"x", "y"}}},
        {"jump", {{"v"}}},              {"ladder-asc", {{"x", "z"}}},       {"ladder-desc", {{"y", "v"}}},
        {"ball", {{"x", "y", "center"}, true}},
    };
    return t;
}

double evaluate(const DensityOptions& o, const StableParams& p, const std::map<std::string, PointXd>& v,
                double radius)
{
    const Barrier b{o.barrier, o.direction == "down" ? Direction::Down : Direction::Up};
    const std::string& k = o.kernel;
    if (k == "pcr") return pcr_density(v.at("x"), v.at("y"), p, b);
    if (k == "triple") return triple_density(v.at("x"), v.at("w"), v.at("y"), v.at("z"), p, b);
    if (k == "double") return double_density(v.at("x"), v.at("y"), v.at("z"), p, b);
    if (k == "overshoot") return overshoot_density(v.at("x"), v.at("z"), p, b);
    if (k == "overshoot-cond")
        return overshoot_density_conditioned(v.at("x"), v.at("y"), o.face == "plus" ? SlabFace::Plus : SlabFace::Minus, p);
    if (k == "green") return green_halfspace(v.at("x"), v.at("y"), p, b);
    if (k == "jump") return jump_density(v.at("v"), p);
    if (k == "ladder-asc") return ascending_ladder_potential(v.at("x"), v.at("z"), p);
    if (k == "ladder-desc") return descending_renewal_density(v.at("y")(0), v.at("v")(0), p.alpha());
    return ball_hitting_density(v.at("x"), v.at("y"), v.at("center"), radius, p);
}

int arg_length(const DensityOptions& o) { return o.kernel == "ladder-desc" ? 1 : o.dim; }

int cmd_density(const DensityOptions& o, std::ostream& out)
{
    const StableParams p(o.alpha, o.dim);
    const KernelArgs& spec = kernel_table().at(o.kernel);
    const int len = arg_length(o);
    Sink sink(o.out, out);

    if (o.points_file.empty()) {
        std::map<std::string, PointXd> v;
        for (const std::string& name : spec.vectors) {
            const auto it = o.points.find(name);
            if (it == o.points.end() || it->second.empty())
                throw UsageError("kernel " + o.kernel + " needs --" + name);
            v[name] = parse_point(it->second, len, "--" + name);
        }
        if (spec.radius && !o.radius) throw UsageError("kernel ball needs --radius");
        sink.get() << num(evaluate(o, p, v, o.radius.value_or(0.0))) << '\n';
        sink.close();
        return kExitOk;
    }

    // Batch mode: header names the columns x1..xd, y1..yd, ... and radius.
    std::ifstream in(o.points_file);
    if (!in) throw std::runtime_error("cannot read " + o.points_file);
    std::string line;
    if (!std::getline(in, line)) throw DomainError(o.points_file + " is empty");
    const std::vector<std::string> header = split(line, ',');
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
    auto need = [&](const std::string& name) {
        const auto it = col.find(name);
        if (it == col.end()) throw DomainError(o.points_file + " lacks column " + name);
        return it->second;
    };
    std::map<std::string, std::vector<std::size_t>> vcols;
    for (const std::string& name : spec.vectors)
        for (int k = 1; k <= len; ++k) vcols[name].push_back(need(name + std::to_string(k)));
    const std::optional<std::size_t> rcol = spec.radius ? std::optional(need("radius")) : std::nullopt;

    std::ostream& os = sink.get();
    os << "row,value,error\n";
    std::size_t rows = 0, good = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split(line, ',');
        std::string error;
        double value = 0.0;
        try {
            auto cell = [&](std::size_t c) {
                const auto d = c < cells.size() ? to_double(cells[c]) : std::nullopt;
                if (!d) throw DomainError("malformed cell in column " + header[c]);
                return *d;
            };
            std::map<std::string, PointXd> v;
            for (const auto& [name, cs] : vcols) {
                PointXd pt(len);
                for (int k = 0; k < len; ++k) pt(k) = cell(cs[static_cast<std::size_t>(k)]);
                v[name] = pt;
            }
            value = evaluate(o, p, v, rcol ? cell(*rcol) : 0.0);
        } catch (const std::exception& e) {
            error = e.what();
            std::replace(error.begin(), error.end(), ',', ';');
        }
        os << rows++ << ',';
        if (error.empty()) {
            os << num(value) << ",\n";
            ++good;
        } else {
            os << ",error: " << error << '\n';
        }
    }
    sink.close();
    if (good == 0) throw DomainError(rows == 0 ? "no points to evaluate" : "every point failed");
    return kExitOk;
}

// ---------------------------------------------------------------------------
// validate

struct ValidateOptions {
    std::vector<std::string> suites;
    bool all = false;
    std::vector<double> alphas;
    std::vector<int> dims;
    std::size_t n = 100000;
    int points = 20;
    std::optional<std::uint64_t> seed;
    int workers = 1;
    std::string out = "-";
};

int cmd_validate(const ValidateOptions& o, std::ostream& out, std::ostream& err)
{
    if (o.all == !o.suites.empty()) throw UsageError("give either --suite NAME or --all");
    std::vector<Suite> chosen;
    if (o.all) chosen = all_suites();
    for (const std::string& s : o.suites) chosen.push_back(parse_suite(s));
    if (!o.dims.empty() && o.alphas.empty()) throw UsageError("--dim needs --alpha");

    SuiteOptions so;
    so.seed = resolve_seed(o.seed);
    so.n = o.n;
    so.workers = o.workers;
    so.points = o.points;
    const std::vector<int> dims = o.dims.empty() ? std::vector<int>{2} : o.dims;
    for (double a : o.alphas)
        for (int d : dims) so.params.emplace_back(a, d);

    json reports = json::array();
    bool pass = true;
    for (Suite s : chosen) {
        const ValidationReport r = run_suite(s, so);
        err << suite_name(s) << ": " << (r.pass() ? "pass" : "FAIL") << '\n';
        pass &= r.pass();
        reports.push_back(r.to_json());
    }
    const json doc = {{"pass", pass}, {"seed", so.seed}, {"n", so.n}, {"suites", reports}};
    Sink sink(o.out, out);
    sink.get() << doc.dump(2) << '\n';
    sink.close();
    return pass ? kExitOk : kExitValidationFail;
}

// ---------------------------------------------------------------------------
// hist

struct HistOptions {
    std::string in;
    std::string out;
    std::string bins = "60,60";
    std::string xrange = "-1,1";
    std::string yrange = "-8,8";
    std::string xcol = "y1";
    std::string ycol = "y2";
};

std::pair<double, double> parse_range(const std::string& s, const std::string& what)
{
    const std::vector<double> v = parse_list(s, what);
    if (v.size() != 2 || !(v[0] < v[1])) throw UsageError(what + " must be LO,HI with LO < HI");
    return {v[0], v[1]};
}

std::string strip_csv(const std::string& path)
{
    const std::string ext = ".csv";
    if (path.size() > ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0)
        return path.substr(0, path.size() - ext.size());
    return path;
}

int cmd_hist(const HistOptions& o, std::ostream& err)
{
    const std::vector<double> nb = parse_list(o.bins, "--bins");
    if (nb.size() != 2 || nb[0] < 1 || nb[1] < 1 || nb[0] != std::floor(nb[0]) || nb[1] != std::floor(nb[1]))
        throw UsageError("--bins must be NX,NY with positive integers");
    const auto [xl, xh] = parse_range(o.xrange, "--xrange");
    const auto [yl, yh] = parse_range(o.yrange, "--yrange");
    const std::string out = o.out.empty() ? strip_csv(o.in) + "_hist.csv" : o.out;
    if (out == "-") throw UsageError("hist writes three files; --out must be a path");

    std::ifstream in(o.in);
    if (!in) throw DomainError("cannot read " + o.in);
    std::string line;
    if (!std::getline(in, line)) throw DomainError(o.in + " is empty");
    const std::vector<std::string> header = split(line, ',');
    const auto find = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw DomainError(o.in + " has no column " + name);
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t cx = find(o.xcol), cy = find(o.ycol);

    Histogram2D h(xl, xh, yl, yh, static_cast<int>(nb[0]), static_cast<int>(nb[1]));
    std::size_t lineno = 1, blank = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split(line, ',');
        if (cells.size() != header.size())
            throw DomainError(o.in + ":" + std::to_string(lineno) + ": expected " + std::to_string(header.size()) + " cells");
        if (cells[cx].empty() && cells[cy].empty()) {
            // Walks stopped by the cap have no final point.
            h.add_clipped();
            ++blank;
            continue;
        }
        const auto x = to_double(cells[cx]), y = to_double(cells[cy]);
        if (!x || !y) throw DomainError(o.in + ":" + std::to_string(lineno) + ": malformed number");
        h.add(*x, *y);
    }
    if (h.total() == 0) throw DomainError(o.in + " has no data rows");

    const std::string base = strip_csv(out);
    for (const auto& [path, writer] :
         std::vector<std::pair<std::string, void (Histogram2D::*)(std::ostream&) const>>{
             {out, &Histogram2D::write_csv},
             {base + "_mx.csv", &Histogram2D::write_marginal_x_csv},
             {base + "_my.csv", &Histogram2D::write_marginal_y_csv}}) {
        std::ofstream os(path, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open " + path + " for writing");
        (h.*writer)(os);
        if (!os.flush()) throw std::runtime_error("write failed: " + path);
    }
    err << "rows " << h.total() << ", clipped " << h.clipped_count() << " (no final point: " << blank << ")\n";
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Walk-on-half-spaces sampler for isotropic stable processes"};
    app.name("wohs");
    app.require_subcommand(1);
    // The config file lives on the top-level app; its keys are filed under
    // whichever subcommand the arguments name.
    std::string section;
    for (const std::string& a : args) {
        if (a == "sample" || a == "walk" || a == "density" || a == "validate" || a == "hist") {
            section = a;
            break;
        }
    }
    app.fallthrough();
    app.set_config("--config", "", "JSON file with flat keys named after the flags; flags win");
    app.config_formatter(std::make_shared<JsonConfig>(section));
    app.allow_config_extras(CLI::config_extras_mode::error);

    SampleOptions so;
    CLI::App* sample = app.add_subcommand("sample", "Draw crossing positions of one hyperplane");
    add_run_options(sample, so);
    sample->add_option("--barrier", so.barrier, "Barrier level")->capture_default_str();
    sample->add_option("--direction", so.direction, "down or up")
        ->check(CLI::IsMember({"down", "up"}))
        ->capture_default_str();

    WalkOptions wo;
    CLI::App* walk = app.add_subcommand("walk", "First entry into the slab (-1,1) x R^(d-1)");
    add_run_options(walk, wo);
    walk->add_option("--mode", wo.mode, "full or collapsed")
        ->check(CLI::IsMember({"full", "collapsed"}))
        ->capture_default_str();
    walk->add_option("--max-crossings", wo.max_crossings, "Crossing cap, 0 for the default")->capture_default_str();
    walk->add_option("--trace", wo.trace, "JSONL file of crossing events");
    walk->add_option("--format", wo.format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}))->capture_default_str();

    DensityOptions dso;
    CLI::App* density = app.add_subcommand("density", "Evaluate a kernel");
    std::vector<std::string> names;
    for (const auto& [k, _] : kernel_table()) names.push_back(k);
    density->add_option("--kernel", dso.kernel, "Kernel name")->required()->check(CLI::IsMember(names));
    density->add_option("--alpha", dso.alpha, "Stability index in (0,2)")->required();
    density->add_option("--dim", dso.dim, "Dimension")->capture_default_str();
    for (const char* p : {"x", "w", "y", "z", "v", "center"})
        density->add_option(std::string("--") + p, dso.points[p], std::string("Point ") + p + " as a comma list");
    density->add_option("--radius", dso.radius, "Ball radius");
    density->add_option("--face", dso.face, "Slab face, plus or minus")
        ->check(CLI::IsMember({"plus", "minus"}))
        ->capture_default_str();
    density->add_option("--barrier", dso.barrier, "Barrier level")->capture_default_str();
    density->add_option("--direction", dso.direction, "down or up")
        ->check(CLI::IsMember({"down", "up"}))
        ->capture_default_str();
    density->add_option("--points", dso.points_file, "CSV of points, one evaluation per row");
    density->add_option("--out", dso.out, "Output file, - for stdout")->capture_default_str();

    ValidateOptions vo;
    CLI::App* validate = app.add_subcommand("validate", "Run validation suites and write a JSON report");
    validate->add_option("--suite", vo.suites, "Suite name (repeatable)")->delimiter(',');
    validate->add_flag("--all", vo.all, "Run every suite");
    validate->add_option("--alpha", vo.alphas, "alpha grid")->delimiter(',');
    validate->add_option("--dim", vo.dims, "dimension grid")->delimiter(',');
    validate->add_option("--n", vo.n, "Sample size of stochastic checks")->capture_default_str();
    validate->add_option("--points", vo.points, "Random points per set in marginalization")->check(CLI::PositiveNumber)->capture_default_str();
    validate->add_option("--seed", vo.seed, "Master seed (default: WOHS_SEED, then 20240917)");
    validate->add_option("--workers", vo.workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    validate->add_option("--out", vo.out, "Report file, - for stdout")->capture_default_str();

    HistOptions ho;
    CLI::App* hist = app.add_subcommand("hist", "Bin a sample or walk CSV");
    hist->add_option("--in", ho.in, "Input CSV")->required();
    hist->add_option("--out", ho.out, "Histogram CSV (default: <in>_hist.csv)");
    hist->add_option("--bins", ho.bins, "NX,NY")->capture_default_str();
    hist->add_option("--xrange", ho.xrange, "LO,HI of the first axis")->capture_default_str();
    hist->add_option("--yrange", ho.yrange, "LO,HI of the second axis")->capture_default_str();
    hist->add_option("--xcol", ho.xcol, "Column on the first axis")->capture_default_str();
    hist->add_option("--ycol", ho.ycol, "Column on the second axis")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (sample->parsed()) return cmd_sample(so, out);
        if (walk->parsed()) return cmd_walk(wo, out);
        if (density->parsed()) return cmd_density(dso, out);
        if (validate->parsed()) return cmd_validate(vo, out, err);
        return cmd_hist(ho, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    }
}

} // namespace wohs
