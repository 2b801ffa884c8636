#include "cli.hpp"

#include "maxent/bk_solver.hpp"
#include "maxent/bs.hpp"
#include "maxent/density.hpp"
#include "maxent/med_solver.hpp"
#include "maxent/mred_solver.hpp"
#include "maxent/surface.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>

namespace maxent::cli {

namespace {

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

std::optional<double> given(double v) { return std::isnan(v) ? std::nullopt : std::optional<double>(v); }

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, sep)) {
        cells.push_back(trim(cell));
    }
    if (!line.empty() && line.back() == sep) {
        cells.emplace_back();
    }
    return cells;
}

double to_number(const std::string& text, const std::string& where) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) {
        throw Error("cannot parse number '" + text + "' " + where);
    }
    return v;
}

// Generic CSV with a header row, `#key,value` comments and a `#meta,k=v,...` line.
struct Table {
    std::map<std::string, double> meta;
    std::map<std::string, std::string> notes;
    std::vector<std::string> header;
    std::vector<std::vector<std::optional<double>>> rows;

    std::optional<std::size_t> column(const std::string& name) const {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            return std::nullopt;
        }
        return static_cast<std::size_t>(it - header.begin());
    }
};

Table parse_table(std::istream& in, const std::vector<std::string>& default_header) {
    Table t;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const std::string where = "on line " + std::to_string(line_no);
        if (line[0] == '#') {
            auto cells = split(line.substr(1), ',');
            if (cells.empty()) {
                continue;
            }
            if (cells[0] == "meta") {
                for (std::size_t i = 1; i < cells.size(); ++i) {
                    const auto eq = cells[i].find('=');
                    if (eq == std::string::npos) {
                        throw Error("malformed meta entry '" + cells[i] + "' " + where);
                    }
                    t.meta[trim(cells[i].substr(0, eq))] = to_number(trim(cells[i].substr(eq + 1)), where);
                }
            } else if (cells.size() >= 2) {
                t.notes[cells[0]] = cells[1];
            }
            continue;
        }
        auto cells = split(line, ',');
        if (t.header.empty() && t.rows.empty() && !cells.empty() && !cells[0].empty() &&
            !(std::isdigit(static_cast<unsigned char>(cells[0][0])) || cells[0][0] == '.' || cells[0][0] == '-')) {
            t.header = cells;
            continue;
        }
        std::vector<std::optional<double>> row;
        for (const auto& c : cells) {
            row.push_back(c.empty() ? std::nullopt : std::optional<double>(to_number(c, where)));
        }
        t.rows.push_back(std::move(row));
    }
    if (t.header.empty()) {
        t.header = default_header;
    }
    return t;
}

const std::vector<std::string> kQuoteHeader{"strike", "call_bid", "call_ask", "digital_bid", "digital_ask"};

std::optional<double> cell(const Table& t, const std::vector<std::optional<double>>& row, const std::string& name) {
    const auto c = t.column(name);
    if (!c || *c >= row.size()) {
        return std::nullopt;
    }
    return row[*c];
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path);
    }
    return in;
}

class Formatter {
public:
    explicit Formatter(int precision) : precision_(precision) {}
    std::string operator()(double v) const {
        std::ostringstream os;
        os << std::setprecision(precision_) << v;
        return os.str();
    }
    std::string operator()(const std::optional<double>& v) const { return v ? (*this)(*v) : std::string(); }

private:
    int precision_;
};

// All flags of every subcommand; each subcommand registers the ones it uses.
struct Options {
    std::string quotes;
    std::string out;
    std::string method = "med";
    std::string strikes;
    std::string prior;
    std::string at;
    std::string matrix;
    std::vector<std::string> fits;
    double maturity = kUnset;
    double df = kUnset;
    double forward = kUnset;
    double spread = kUnset;
    double spot = kUnset;
    double slack = kDefaultValidationSlack;
    int precision = 6;
    double vol = 0.25;
    std::vector<double> maturities{0.1, 0.5, 1.0, 2.0, 5.0};
    std::vector<double> atm_vols{0.25};
    double low = 0.5;
    double high = 2.0;
    std::size_t points = 31;
    std::size_t count = 1000;
    std::uint64_t seed = 42;
};

// Quote file with slice metadata resolved: flags override the `#meta` line.
struct Market {
    QuoteFile file;
    double maturity = 0.0;
    double df = 1.0;
    std::optional<double> forward;

    double require_forward() const {
        if (!forward) {
            throw MissingForward();
        }
        return *forward;
    }
};

Market load_market(const Options& o) {
    Market m;
    m.file = read_quote_file(o.quotes);
    auto pick = [&](double flag, const char* key) -> std::optional<double> {
        if (auto v = given(flag)) {
            return v;
        }
        const auto it = m.file.meta.find(key);
        return it == m.file.meta.end() ? std::nullopt : std::optional<double>(it->second);
    };
    const auto t = pick(o.maturity, "T");
    if (!t) {
        throw Error("maturity missing: pass --maturity or a #meta T= entry");
    }
    m.maturity = *t;
    m.df = pick(o.df, "DF").value_or(1.0);
    m.forward = pick(o.forward, "F");
    if (!m.forward) {
        for (const auto& q : m.file.quotes) {
            if (q.strike == 0.0 && q.call_mid()) {
                m.forward = *q.call_mid() / m.df;
            }
        }
    }
    return m;
}

bool same_strike(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)); }

std::vector<double> quoted_strikes(const Market& m) {
    std::vector<double> k;
    for (const auto& q : m.file.quotes) {
        if (q.strike > 0.0) {
            k.push_back(q.strike);
        }
    }
    std::sort(k.begin(), k.end());
    return k;
}

const RawQuote& find_quote(const Market& m, double strike) {
    for (const auto& q : m.file.quotes) {
        if (same_strike(q.strike, strike)) {
            return q;
        }
    }
    throw Error("strike " + std::to_string(strike) + " not in quote file");
}

std::vector<RawQuote> select_quotes(const Market& m, const std::vector<double>& targets, std::optional<double> spread) {
    if (spread) {
        return with_spread_digitals(m.file.quotes, targets, *spread);
    }
    std::vector<RawQuote> out;
    for (double k : targets) {
        out.push_back(find_quote(m, k));
    }
    return out;
}

/// A calibrated density of any method with uniform pricing.
struct Model {
    std::string method;
    double maturity = 0.0;
    double df = 1.0;
    double forward = 0.0;
    std::vector<double> strikes; ///< including K_0 = 0
    std::vector<double> calls;   ///< undiscounted inputs
    std::vector<double> digitals; ///< undiscounted inputs; empty for calls-only fits
    std::optional<MedDensity> med;
    std::optional<MredDensity> mred;
    std::optional<BkDensity> bk;

    double call(double k) const {
        if (med) {
            return price_call(*med, k);
        }
        if (mred) {
            return mred_price_call(*mred, k);
        }
        return bk_price_call(*bk, k);
    }
    double digital(double k) const {
        if (k <= 0.0) {
            return 1.0;
        }
        if (med) {
            return price_digital(*med, k);
        }
        if (mred) {
            return mred_price_digital(*mred, k);
        }
        return bk_price_digital(*bk, k);
    }
};

MedDensity load_med_report(const std::string& path) {
    auto in = open_input(path);
    const Table t = parse_table(in, {});
    for (const char* col : {"strike", "call", "digital"}) {
        if (!t.column(col)) {
            throw Error(path + ": prior report lacks column '" + col + "'");
        }
    }
    const auto tm = t.meta.find("T");
    const auto df = t.meta.find("DF");
    std::vector<double> k;
    std::vector<double> c;
    std::vector<double> d;
    for (const auto& row : t.rows) {
        const auto ks = cell(t, row, "strike");
        const auto cs = cell(t, row, "call");
        const auto ds = cell(t, row, "digital");
        if (!ks || !cs || !ds) {
            throw Error(path + ": incomplete prior row");
        }
        k.push_back(*ks);
        c.push_back(*cs);
        d.push_back(*ds);
    }
    MaturitySlice slice(tm == t.meta.end() ? 1.0 : tm->second, df == t.meta.end() ? 1.0 : df->second, k, c, d);
    if (auto v = validate_slice(slice); !v.empty()) {
        throw ValidationError(std::move(v));
    }
    return calibrate(slice);
}

Prior parse_prior(const std::string& spec, const Market& m) {
    if (spec.rfind("lognormal:", 0) == 0) {
        const auto params = split(spec.substr(10), ',');
        double sigma = kUnset;
        for (const auto& p : params) {
            const auto eq = p.find('=');
            if (eq != std::string::npos && trim(p.substr(0, eq)) == "sigma") {
                sigma = to_number(trim(p.substr(eq + 1)), "in --prior");
            }
        }
        if (std::isnan(sigma)) {
            throw Error("--prior lognormal needs sigma=<vol>");
        }
        return LogNormalPrior{m.require_forward(), sigma, m.maturity};
    }
    if (spec.rfind("med:", 0) == 0) {
        return load_med_report(spec.substr(4));
    }
    throw Error("unknown prior '" + spec + "' (expected lognormal:sigma=<v> or med:<file>)");
}

Model fit(const Market& m, const std::string& method, const std::vector<double>& targets, const Options& o) {
    Model model;
    model.method = method;
    model.maturity = m.maturity;
    model.df = m.df;
    const auto spread = given(o.spread);
    const auto quotes = select_quotes(m, targets, spread);

    if (method == "med" || method == "mred") {
        const MaturitySlice slice = build_slice(quotes, m.df, m.maturity, m.forward, o.slack);
        model.forward = slice.forward();
        model.strikes = slice.strikes();
        model.calls = slice.calls();
        model.digitals = slice.digitals();
        if (method == "med") {
            model.med = calibrate(slice);
        } else {
            if (o.prior.empty()) {
                throw Error("--method mred needs --prior");
            }
            const Prior prior = parse_prior(o.prior, m);
            if (const auto* ln = std::get_if<LogNormalPrior>(&prior)) {
                model.mred = mred_calibrate(slice, *ln);
            } else {
                model.mred = mred_calibrate_med_prior(slice, std::get<MedDensity>(prior));
            }
        }
        return model;
    }
    if (method != "bk") {
        throw Error("unknown method '" + method + "' (expected med, mred or bk)");
    }
    model.forward = m.require_forward();
    model.strikes = {0.0};
    model.calls = {model.forward};
    for (const auto& q : quotes) {
        if (q.strike == 0.0) {
            continue;
        }
        const auto mid = q.call_mid();
        if (!mid) {
            throw Error("no call quote at strike " + std::to_string(q.strike));
        }
        model.strikes.push_back(q.strike);
        model.calls.push_back(*mid / m.df);
    }
    // Warm start from a calls-and-digitals MED when digitals are available.
    std::optional<std::vector<double>> start;
    try {
        start = bk_initial_from_med(calibrate(build_slice(quotes, m.df, m.maturity, model.forward, o.slack)));
    } catch (const Error&) {
        start.reset();
    }
    try {
        model.bk = bk_calibrate(model.strikes, model.calls, {}, start);
    } catch (const NonConvergence&) {
        if (!start) {
            throw;
        }
        model.bk = bk_calibrate(model.strikes, model.calls);
    }
    return model;
}

std::vector<double> calibration_strikes(const Market& m, const std::string& spec) {
    return spec.empty() ? quoted_strikes(m) : parse_strike_list(spec);
}

std::vector<double> evaluation_strikes(const Market& m, const Options& o) {
    return o.at.empty() ? quoted_strikes(m) : parse_strike_list(o.at);
}

// Writes to --out when given, otherwise to the caller's stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) {
                throw Error("cannot write " + path);
            }
            stream_ = file_.get();
        }
    }
    std::ostream& operator*() { return *stream_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_;
};

void write_meta(std::ostream& os, const Formatter& f, double t, double df, double forward) {
    os << "#meta,T=" << f(t) << ",DF=" << f(df) << ",F=" << f(forward) << '\n';
}

double max_residual(const Model& model) {
    double r = 0.0;
    for (std::size_t i = 0; i < model.strikes.size(); ++i) {
        r = std::max(r, std::abs(model.call(model.strikes[i]) - model.calls[i]));
        if (!model.digitals.empty()) {
            r = std::max(r, std::abs(model.digital(model.strikes[i]) - model.digitals[i]));
        }
    }
    return r;
}

void cmd_genmarket(const Options& o, std::ostream& out) {
    const BsParams p{given(o.forward).value_or(100.0), o.vol, given(o.maturity).value_or(1.0),
                     given(o.df).value_or(1.0)};
    p.check();
    const Formatter f(o.precision);
    const auto strikes = parse_strike_list(o.strikes.empty() ? "0:180:20" : o.strikes);
    Sink sink(o.out, out);
    auto& os = *sink;
    write_meta(os, f, p.maturity, p.discount_factor, p.forward);
    os << "strike,call_bid,call_ask,digital_bid,digital_ask\n";
    for (double k : strikes) {
        const double c = p.discount_factor * bs_call(p, k);
        const double d = p.discount_factor * bs_digital(p, k);
        os << f(k) << ',' << f(c) << ',' << f(c) << ',' << f(d) << ',' << f(d) << '\n';
    }
}

void cmd_calibrate(const Options& o, std::ostream& out) {
    const Market m = load_market(o);
    const Model model = fit(m, o.method, calibration_strikes(m, o.strikes), o);
    const Formatter f(o.precision);
    Sink sink(o.out, out);
    auto& os = *sink;
    write_meta(os, f, model.maturity, model.df, model.forward);
    os << "#method," << model.method << '\n';
    os << "#prices,undiscounted\n";
    if (model.med) {
        os << "#entropy," << f(entropy(*model.med)) << '\n';
    } else if (model.mred) {
        os << "#i_divergence," << f(i_divergence(*model.mred)) << '\n';
    } else {
        os << "#mu," << f(model.bk->mu()) << '\n';
    }
    os << "#max_residual," << f(max_residual(model)) << '\n';
    if (model.med) {
        os << "strike,call,digital,alpha,beta\n";
        for (std::size_t i = 0; i < model.strikes.size(); ++i) {
            const auto& b = model.med->buckets()[i];
            os << f(model.strikes[i]) << ',' << f(model.calls[i]) << ',' << f(model.digitals[i]) << ',' << f(b.alpha)
               << ',' << f(b.beta) << '\n';
        }
    } else if (model.mred) {
        os << "strike,call,digital,gamma,delta\n";
        for (std::size_t i = 0; i < model.strikes.size(); ++i) {
            const auto& b = model.mred->buckets()[i];
            os << f(model.strikes[i]) << ',' << f(model.calls[i]) << ',' << f(model.digitals[i]) << ',' << f(b.gamma)
               << ',' << f(b.delta) << '\n';
        }
    } else {
        os << "strike,call,digital,lambda\n";
        for (std::size_t i = 0; i < model.strikes.size(); ++i) {
            os << f(model.strikes[i]) << ',' << f(model.calls[i]) << ',' << f(model.digital(model.strikes[i])) << ','
               << f(model.bk->lambdas()[i]) << '\n';
        }
    }
}

void cmd_price(const Options& o, std::ostream& out) {
    const Market m = load_market(o);
    const Model model = fit(m, o.method, calibration_strikes(m, o.strikes), o);
    const double spot = given(o.spot).value_or(model.forward * model.df);
    if (!(spot > 0.0)) {
        throw DomainError("--spot must be positive");
    }
    const Formatter f(o.precision);
    Sink sink(o.out, out);
    auto& os = *sink;
    os << "strike,call,digital,delta\n";
    for (double k : evaluation_strikes(m, o)) {
        const double c = model.call(k);
        const double d = model.digital(k);
        // Euler's relation: the call is homogeneous of degree one in (S, K).
        const double delta = model.med ? spot_delta(*model.med, k, spot, model.df) : model.df * (c + k * d) / spot;
        os << f(k) << ',' << f(model.df * c) << ',' << f(model.df * d) << ',' << f(delta) << '\n';
    }
}

std::optional<double> vol_or_empty(double price, double forward, double strike, double maturity) {
    try {
        return implied_vol(price, forward, strike, maturity);
    } catch (const Error&) {
        return std::nullopt;
    }
}

void cmd_smile(const Options& o, std::ostream& out) {
    const Market m = load_market(o);
    const Model model = fit(m, o.method, calibration_strikes(m, o.strikes), o);
    const Formatter f(o.precision);
    Sink sink(o.out, out);
    auto& os = *sink;
    os << "K,vol\n";
    for (double k : evaluation_strikes(m, o)) {
        os << f(k) << ',' << f(vol_or_empty(model.call(k), model.forward, k, model.maturity)) << '\n';
    }
}

void cmd_surface(const Options& o, std::ostream& out) {
    const double forward = given(o.forward).value_or(100.0);
    std::vector<double> vols = o.atm_vols;
    if (vols.size() == 1) {
        vols.assign(o.maturities.size(), vols.front());
    }
    const auto strikes = o.at.empty() ? log_moneyness_grid(forward, o.low, o.high, o.points) : parse_strike_list(o.at);
    const VolGrid grid = atm_surface(forward, vols, o.maturities, strikes);
    const Formatter f(o.precision);
    {
        Sink sink(o.out, out);
        auto& os = *sink;
        os << "T,K,vol\n";
        for (std::size_t t = 0; t < grid.maturities.size(); ++t) {
            for (std::size_t k = 0; k < grid.strikes.size(); ++k) {
                os << f(grid.maturities[t]) << ',' << f(grid.strikes[k]) << ',' << f(grid.vols[t][k]) << '\n';
            }
        }
    }
    if (!o.matrix.empty()) {
        // gnuplot "nonuniform matrix": first row holds the strikes, first column the maturities.
        std::ofstream mx(o.matrix);
        if (!mx) {
            throw Error("cannot write " + o.matrix);
        }
        mx << grid.strikes.size();
        for (double k : grid.strikes) {
            mx << ' ' << f(k);
        }
        mx << '\n';
        for (std::size_t t = 0; t < grid.maturities.size(); ++t) {
            mx << f(grid.maturities[t]);
            for (const auto& v : grid.vols[t]) {
                mx << ' ' << (v ? f(*v) : std::string("NaN"));
            }
            mx << '\n';
        }
    }
}

void cmd_sample(const Options& o, std::ostream& out) {
    if (o.method != "med") {
        throw Error("sample supports --method med only");
    }
    const Market m = load_market(o);
    const Model model = fit(m, o.method, calibration_strikes(m, o.strikes), o);
    const Formatter f(o.precision);
    Sink sink(o.out, out);
    auto& os = *sink;
    for (double x : sample(*model.med, o.count, o.seed)) {
        os << f(x) << '\n';
    }
}

void cmd_compare(const Options& o, std::ostream& out) {
    if (o.fits.empty()) {
        throw Error("compare needs at least one --fit label=method@strikes");
    }
    const Market m = load_market(o);
    std::vector<std::string> labels;
    std::vector<Model> models;
    for (const auto& spec : o.fits) {
        const auto eq = spec.find('=');
        const auto at = spec.find('@');
        if (eq == std::string::npos || eq == 0) {
            throw Error("malformed --fit '" + spec + "' (expected label=method[@strikes])");
        }
        labels.push_back(spec.substr(0, eq));
        const std::string method = spec.substr(eq + 1, at == std::string::npos ? std::string::npos : at - eq - 1);
        const std::string strikes = at == std::string::npos ? std::string() : spec.substr(at + 1);
        models.push_back(fit(m, method, calibration_strikes(m, strikes), o));
    }
    const Formatter f(o.precision);
    Sink sink(o.out, out);
    auto& os = *sink;
    os << "strike,market_call,market_digital,market_vol";
    for (const auto& l : labels) {
        os << ',' << l << "_call," << l << "_digital," << l << "_vol";
    }
    os << '\n';
    const double forward = m.require_forward();
    for (double k : evaluation_strikes(m, o)) {
        const auto& q = find_quote(m, k);
        const auto c = q.call_mid();
        std::optional<double> vol;
        if (c) {
            vol = vol_or_empty(*c / m.df, forward, k, m.maturity);
        }
        os << f(k) << ',' << f(c) << ',' << f(q.digital_mid()) << ',' << f(vol);
        for (const auto& model : models) {
            const double mc = model.call(k);
            os << ',' << f(model.df * mc) << ',' << f(model.df * model.digital(k)) << ','
               << f(vol_or_empty(mc, model.forward, k, model.maturity));
        }
        os << '\n';
    }
}

void add_market_flags(CLI::App* sub, Options& o) {
    sub->add_option("--quotes,-q", o.quotes, "Quote CSV (strike,call_bid,call_ask,digital_bid,digital_ask)")
        ->required();
    sub->add_option("--maturity,-T", o.maturity, "Maturity in years (overrides #meta T)");
    sub->add_option("--df", o.df, "Discount factor (overrides #meta DF; default 1)");
    sub->add_option("--forward,-F", o.forward, "Forward (overrides #meta F and any K=0 quote)");
    sub->add_option("--slack", o.slack, "Absolute slack on strict no-arbitrage inequalities")->capture_default_str();
    sub->add_option("--spread-digitals", o.spread, "Replace digitals by call spreads at K -/+ width");
}

void add_fit_flags(CLI::App* sub, Options& o) {
    sub->add_option("--method,-m", o.method, "med, mred or bk")->capture_default_str();
    sub->add_option("--strikes,-k", o.strikes, "Calibration strikes: a:b:step or a,b,c (default: all)");
    sub->add_option("--prior", o.prior, "MRED prior: lognormal:sigma=<vol> or med:<report.csv>");
}

void add_output_flags(CLI::App* sub, Options& o) {
    sub->add_option("--out,-o", o.out, "Output file (default stdout)");
    sub->add_option("--precision", o.precision, "Significant digits in CSV output")->capture_default_str();
}

} // namespace

QuoteFile parse_quote_file(std::istream& in) {
    const Table t = parse_table(in, kQuoteHeader);
    if (!t.column("strike")) {
        throw Error("quote file lacks a strike column");
    }
    QuoteFile file;
    file.meta = t.meta;
    for (const auto& row : t.rows) {
        RawQuote q;
        const auto k = cell(t, row, "strike");
        if (!k) {
            throw Error("quote row without strike");
        }
        q.strike = *k;
        q.call_bid = cell(t, row, "call_bid");
        q.call_ask = cell(t, row, "call_ask");
        q.digital_bid = cell(t, row, "digital_bid");
        q.digital_ask = cell(t, row, "digital_ask");
        file.quotes.push_back(q);
    }
    return file;
}

QuoteFile read_quote_file(const std::string& path) {
    auto in = open_input(path);
    return parse_quote_file(in);
}

std::vector<double> parse_strike_list(const std::string& spec) {
    std::vector<double> out;
    if (spec.find(':') != std::string::npos) {
        const auto parts = split(spec, ':');
        if (parts.size() != 3) {
            throw Error("strike range must be a:b:step, got '" + spec + "'");
        }
        const double a = to_number(parts[0], "in strike range");
        const double b = to_number(parts[1], "in strike range");
        const double step = to_number(parts[2], "in strike range");
        if (!(step > 0.0) || b < a) {
            throw Error("strike range needs step > 0 and a <= b");
        }
        const auto n = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9));
        for (std::size_t i = 0; i <= n; ++i) {
            out.push_back(a + step * static_cast<double>(i));
        }
        return out;
    }
    for (const auto& c : split(spec, ',')) {
        if (!c.empty()) {
            out.push_back(to_number(c, "in strike list"));
        }
    }
    if (out.empty()) {
        throw Error("empty strike list");
    }
    return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Maximum entropy densities from call and digital quotes"};
    app.require_subcommand(1);
    Options o;

    auto* gen = app.add_subcommand("genmarket", "Flat-vol Black-Scholes quote file");
    gen->add_option("--forward,-F", o.forward, "Forward (default 100)");
    gen->add_option("--vol", o.vol, "Flat volatility")->capture_default_str();
    gen->add_option("--maturity,-T", o.maturity, "Maturity in years (default 1)");
    gen->add_option("--df", o.df, "Discount factor (default 1)");
    gen->add_option("--strikes,-k", o.strikes, "Strikes a:b:step or list (default 0:180:20)");
    add_output_flags(gen, o);

    auto* cal = app.add_subcommand("calibrate", "Calibrate and write the parameter report");
    add_market_flags(cal, o);
    add_fit_flags(cal, o);
    add_output_flags(cal, o);

    auto* price = app.add_subcommand("price", "Discounted call, digital and spot delta");
    add_market_flags(price, o);
    add_fit_flags(price, o);
    add_output_flags(price, o);
    price->add_option("--at", o.at, "Pricing strikes (default: quoted strikes)");
    price->add_option("--spot", o.spot, "Spot for the delta (default F * DF)");

    auto* sm = app.add_subcommand("smile", "Implied vols of a calibrated density");
    add_market_flags(sm, o);
    add_fit_flags(sm, o);
    add_output_flags(sm, o);
    sm->add_option("--at", o.at, "Strikes (default: quoted strikes)");

    auto* surf = app.add_subcommand("surface", "ATM-only implied vol surface");
    surf->add_option("--forward,-F", o.forward, "Forward (default 100)");
    surf->add_option("--atm-vol", o.atm_vols, "ATM vol, one value or one per maturity")->delimiter(',')->capture_default_str();
    surf->add_option("--maturities", o.maturities, "Increasing maturities in years")->delimiter(',')->capture_default_str();
    surf->add_option("--low", o.low, "Lowest K/F")->capture_default_str();
    surf->add_option("--high", o.high, "Highest K/F")->capture_default_str();
    surf->add_option("--points", o.points, "Log-spaced strikes")->capture_default_str();
    surf->add_option("--at", o.at, "Explicit strikes instead of the moneyness grid");
    surf->add_option("--matrix", o.matrix, "Also write a gnuplot nonuniform matrix file");
    add_output_flags(surf, o);

    auto* smp = app.add_subcommand("sample", "Inverse-CDF draws from a calibrated MED");
    add_market_flags(smp, o);
    add_fit_flags(smp, o);
    add_output_flags(smp, o);
    smp->add_option("--count,-n", o.count, "Number of draws")->capture_default_str();
    smp->add_option("--seed", o.seed, "Random seed")->capture_default_str();

    auto* cmp = app.add_subcommand("compare", "Market against one or more fits, side by side");
    add_market_flags(cmp, o);
    add_output_flags(cmp, o);
    cmp->add_option("--fit", o.fits, "label=method@strikes (repeatable)");
    cmp->add_option("--prior", o.prior, "Prior for mred fits");
    cmp->add_option("--at", o.at, "Rows (default: quoted strikes)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kRuntimeError;
    }

    try {
        if (!o.prior.empty() && o.method != "mred" && !cmp->parsed()) {
            throw Error("--prior applies only to --method mred");
        }
        if (gen->parsed()) {
            cmd_genmarket(o, out);
        } else if (cal->parsed()) {
            cmd_calibrate(o, out);
        } else if (price->parsed()) {
            cmd_price(o, out);
        } else if (sm->parsed()) {
            cmd_smile(o, out);
        } else if (surf->parsed()) {
            cmd_surface(o, out);
        } else if (smp->parsed()) {
            cmd_sample(o, out);
        } else if (cmp->parsed()) {
            cmd_compare(o, out);
        }
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const ArbitrageError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
    return kOk;
}

} // namespace maxent::cli
