#include "dfslab/cli.hpp"

#include "dfslab/errors.hpp"
#include "dfslab/evolution.hpp"
#include "dfslab/lindblad_model.hpp"
#include "dfslab/verification.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

namespace dfslab::cli {

namespace {

using boost::property_tree::ptree;

// IPDFS search builds one dense 2^N operator per jump; keep it desk-sized.
constexpr int ipdfs_cap = 10;

// ------------------------------- value parsing --------------------------------

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& key) {
    const std::string t = trim(text);
    try {
        std::size_t used = 0;
        const double v = std::stod(t, &used);
        if (used == t.size() && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("config: '" + key + "' expects a number, got '" + text + "'");
}

int parse_int(const std::string& text, const std::string& key) {
    const std::string t = trim(text);
    try {
        std::size_t used = 0;
        const long v = std::stol(t, &used);
        if (used == t.size() && v >= -1000000 && v <= 1000000) return static_cast<int>(v);
    } catch (const std::exception&) {
    }
    throw ConfigError("config: '" + key + "' expects an integer, got '" + text + "'");
}

bool parse_bool(const std::string& text, const std::string& key) {
    const std::string t = trim(text);
    if (t == "true" || t == "yes" || t == "1") return true;
    if (t == "false" || t == "no" || t == "0") return false;
    throw ConfigError("config: '" + key + "' expects true/false, got '" + text + "'");
}

Vec3 parse_vec3(const std::string& text, const std::string& key) {
    std::string t = text;
    std::replace(t.begin(), t.end(), ',', ' ');
    std::istringstream in(t);
    std::vector<double> v;
    std::string tok;
    while (in >> tok) v.push_back(parse_double(tok, key));
    if (v.size() != 3) throw ConfigError("config: '" + key + "' expects three coordinates");
    return {v[0], v[1], v[2]};
}

std::vector<Vec3> parse_positions(const std::string& text) {
    std::vector<Vec3> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto stop = std::min(text.find(';', start), text.size());
        const std::string item = trim(text.substr(start, stop - start));
        if (!item.empty()) out.push_back(parse_vec3(item, "geometry.positions"));
        start = stop + 1;
    }
    return out;
}

class Section {
public:
    Section(const ptree& tree, std::string name, std::set<std::string> allowed)
        : name_(std::move(name)) {
        if (const auto child = tree.get_child_optional(name_)) node_ = &*child;
        if (!node_) return;
        for (const auto& [key, value] : *node_) {
            if (!allowed.count(key)) throw ConfigError("config: unknown key '" + name_ + "." + key + "'");
        }
    }
    bool present() const { return node_ != nullptr; }
    std::optional<std::string> get(const std::string& key) const {
        if (!node_) return std::nullopt;
        if (const auto v = node_->get_optional<std::string>(key)) return trim(*v);
        return std::nullopt;
    }
    std::string full(const std::string& key) const { return name_ + "." + key; }

private:
    std::string name_;
    const ptree* node_{nullptr};
};

std::vector<double> scan_values(const ScanSpec& scan) {
    std::vector<double> out;
    for (int i = 0; i < scan.steps; ++i) {
        double v = scan.start + (scan.stop - scan.start) * i / (scan.steps - 1);
        if (scan.parameter == "n") v = std::round(v);
        out.push_back(v);
    }
    return out;
}

std::string geometry_name(Geometry g) {
    switch (g) {
    case Geometry::line: return "line";
    case Geometry::square: return "square";
    case Geometry::ring: return "ring";
    case Geometry::custom: return "custom";
    }
    return "?";
}

Cell number_or_empty(double v) {
    if (!std::isfinite(v)) return std::monostate{};
    return v;
}

ComplexVector initial_state(const AtomConfiguration& atoms, const std::string& spec) {
    const int n = atoms.size();
    const std::size_t dim = std::size_t{1} << n;
    if (spec == "ground") return basis_state(dim, 0);
    if (spec == "excited") return basis_state(dim, dim - 1);
    const auto colon = spec.find(':');
    if (colon != std::string::npos) {
        const std::string kind = spec.substr(0, colon);
        const int index = parse_int(spec.substr(colon + 1), "evolve.initial");
        if (kind == "atom") {
            if (index < 1 || index > n) throw ConfigError("config: evolve.initial atom index out of range");
            return basis_state(dim, particle_bit(index, n));
        }
        if (kind == "mode") {
            if (index < 0 || index >= n) throw ConfigError("config: evolve.initial mode index out of range");
            const SymmetricSpectrum modes = symmetric_eig(reduced_matrix(atoms));
            return single_excitation_state(modes.eigenvectors.col(index).cast<cplx>());
        }
    }
    throw ConfigError("config: evolve.initial must be ground, excited, atom:<k> or mode:<m>");
}

std::string render_cell_csv(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) return "";
            else if constexpr (std::is_same_v<T, long>) return std::to_string(v);
            else if constexpr (std::is_same_v<T, double>) return format_number(v);
            else return v;
        },
        c);
}

nlohmann::ordered_json cell_json(const Cell& c) {
    return std::visit(
        [](const auto& v) -> nlohmann::ordered_json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
            else if constexpr (std::is_same_v<T, long>) return v;
            else if constexpr (std::is_same_v<T, double>) return std::stod(format_number(v));
            else return v;
        },
        c);
}

Table base_table(const RunConfig& config) {
    Table t;
    t.config_line = config.describe();
    return t;
}

} // namespace

// ---------------------------------- RunConfig ----------------------------------

std::vector<Vec3> RunConfig::atom_positions() const {
    if (geometry == Geometry::custom) return positions;
    return build().positions();
}

AtomConfiguration RunConfig::build() const {
    return build_with("", 0.0);
}

AtomConfiguration RunConfig::build_with(const std::string& parameter, double value) const {
    auto pick = [&](const char* name, double current) { return parameter == name ? value : current; };
    const int count = parameter == "n" ? static_cast<int>(std::lround(value)) : n;
    std::vector<Vec3> pos;
    Vec3 d = dipole;
    switch (geometry) {
    case Geometry::line: {
        const auto atoms = line_config(count, pick("spacing", spacing),
                                       orientation == "transverse" ? LineOrientation::transverse
                                                                   : LineOrientation::axial);
        pos = atoms.positions();
        d = atoms.dipole();
        break;
    }
    case Geometry::square: {
        const auto atoms = square_config(pick("side", side));
        pos = atoms.positions();
        d = atoms.dipole();
        break;
    }
    case Geometry::ring: {
        const auto atoms = ring_config(count, pick("radius", radius),
                                       orientation == "tangential" ? RingOrientation::tangential
                                                                   : RingOrientation::normal);
        pos = atoms.positions();
        d = atoms.dipole();
        break;
    }
    case Geometry::custom: {
        const double scale = pick("scale", 1.0);
        for (const auto& p : positions) pos.push_back(scale * p);
        break;
    }
    }
    return AtomConfiguration(std::move(pos), d, gamma0, dicke);
}

std::string RunConfig::describe() const {
    nlohmann::ordered_json j;
    j["geometry"] = geometry_name(geometry);
    switch (geometry) {
    case Geometry::line:
        j["n"] = n;
        j["spacing"] = spacing;
        j["orientation"] = orientation;
        break;
    case Geometry::square:
        j["side"] = side;
        break;
    case Geometry::ring:
        j["n"] = n;
        j["radius"] = radius;
        j["orientation"] = orientation;
        break;
    case Geometry::custom: {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& p : positions) arr.push_back({p.x(), p.y(), p.z()});
        j["positions"] = arr;
        j["dipole"] = {dipole.x(), dipole.y(), dipole.z()};
        break;
    }
    }
    j["dicke"] = dicke;
    j["gamma0"] = gamma0;
    if (scan) {
        j["scan"] = {{"parameter", scan->parameter}, {"start", scan->start}, {"stop", scan->stop},
                     {"steps", scan->steps}};
    } else {
        j["scan"] = nullptr;
    }
    if (evolve) {
        j["evolve"] = {{"initial", evolve->initial}, {"t_final", evolve->t_final}, {"dt", evolve->dt},
                       {"stride", evolve->stride}, {"fit", evolve->fit}};
    } else {
        j["evolve"] = nullptr;
    }
    return j.dump();
}

RunConfig parse_config(std::istream& in) {
    ptree tree;
    try {
        boost::property_tree::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    for (const auto& [name, node] : tree) {
        if (name != "geometry" && name != "scan" && name != "evolve" && name != "output") {
            throw ConfigError("config: unknown section '" + name + "'");
        }
        if (node.empty()) throw ConfigError("config: key '" + name + "' outside any section");
    }

    RunConfig c;
    const Section geo(tree, "geometry",
                      {"type", "n", "spacing", "side", "radius", "orientation", "positions", "dipole",
                       "dicke", "gamma0"});
    if (!geo.present()) throw ConfigError("config: missing [geometry] section");
    const std::string type = geo.get("type").value_or("");
    if (type == "line") c.geometry = Geometry::line;
    else if (type == "square") c.geometry = Geometry::square;
    else if (type == "ring") c.geometry = Geometry::ring;
    else if (type == "custom") c.geometry = Geometry::custom;
    else throw ConfigError("config: geometry.type must be line, square, ring or custom");

    if (auto v = geo.get("n")) c.n = parse_int(*v, geo.full("n"));
    if (auto v = geo.get("spacing")) c.spacing = parse_double(*v, geo.full("spacing"));
    if (auto v = geo.get("side")) c.side = parse_double(*v, geo.full("side"));
    if (auto v = geo.get("radius")) c.radius = parse_double(*v, geo.full("radius"));
    if (auto v = geo.get("dicke")) c.dicke = parse_bool(*v, geo.full("dicke"));
    if (auto v = geo.get("gamma0")) c.gamma0 = parse_double(*v, geo.full("gamma0"));
    c.orientation = geo.get("orientation").value_or("");
    if (!(c.gamma0 > 0.0)) throw ConfigError("config: geometry.gamma0 must be > 0");

    switch (c.geometry) {
    case Geometry::line:
        if (c.orientation.empty()) c.orientation = "axial";
        if (c.orientation != "axial" && c.orientation != "transverse") {
            throw ConfigError("config: line orientation must be axial or transverse");
        }
        if (c.n < 1 || !(c.spacing > 0.0)) throw ConfigError("config: line needs n >= 1 and spacing > 0");
        break;
    case Geometry::square:
        c.n = 4;
        if (!(c.side > 0.0)) throw ConfigError("config: square side must be > 0");
        break;
    case Geometry::ring:
        if (c.orientation.empty()) c.orientation = "normal";
        if (c.orientation != "normal" && c.orientation != "tangential") {
            throw ConfigError("config: ring orientation must be normal or tangential");
        }
        if (c.n < 2 || !(c.radius > 0.0)) throw ConfigError("config: ring needs n >= 2 and radius > 0");
        break;
    case Geometry::custom: {
        const auto pos = geo.get("positions");
        const auto dip = geo.get("dipole");
        if (!pos || !dip) throw ConfigError("config: custom geometry needs positions and dipole");
        c.positions = parse_positions(*pos);
        if (c.positions.empty()) throw ConfigError("config: custom geometry has no positions");
        c.n = static_cast<int>(c.positions.size());
        c.dipole = parse_vec3(*dip, geo.full("dipole"));
        if (std::abs(c.dipole.norm() - 1.0) > 1e-9) throw ConfigError("config: dipole must be a unit vector");
        c.dipole.normalize();
        break;
    }
    }

    const Section scan(tree, "scan", {"parameter", "start", "stop", "steps"});
    if (scan.present()) {
        ScanSpec s;
        s.parameter = scan.get("parameter").value_or("");
        const std::set<std::string> allowed = [&]() -> std::set<std::string> {
            switch (c.geometry) {
            case Geometry::line: return {"spacing", "n"};
            case Geometry::square: return {"side"};
            case Geometry::ring: return {"radius", "n"};
            case Geometry::custom: return {"scale"};
            }
            return {};
        }();
        if (!allowed.count(s.parameter)) {
            throw ConfigError("config: scan.parameter '" + s.parameter + "' does not apply to this geometry");
        }
        s.start = parse_double(scan.get("start").value_or(""), scan.full("start"));
        s.stop = parse_double(scan.get("stop").value_or(""), scan.full("stop"));
        s.steps = parse_int(scan.get("steps").value_or(""), scan.full("steps"));
        if (s.steps < 2) throw ConfigError("config: scan.steps must be >= 2");
        if (!(s.start < s.stop)) throw ConfigError("config: scan.start must be < scan.stop");
        if (!(s.start > 0.0)) throw ConfigError("config: scan values must be positive");
        if (s.parameter == "n" && std::lround(s.start) < (c.geometry == Geometry::ring ? 2 : 1)) {
            throw ConfigError("config: scan over n starts below the geometry minimum");
        }
        c.scan = s;
    }

    const Section evo(tree, "evolve", {"initial", "t_final", "dt", "stride", "fit"});
    if (evo.present()) {
        EvolveSpec e;
        if (auto v = evo.get("initial")) e.initial = *v;
        if (auto v = evo.get("t_final")) e.t_final = parse_double(*v, evo.full("t_final"));
        if (auto v = evo.get("dt")) e.dt = parse_double(*v, evo.full("dt"));
        if (auto v = evo.get("stride")) e.stride = parse_int(*v, evo.full("stride"));
        if (auto v = evo.get("fit")) e.fit = parse_bool(*v, evo.full("fit"));
        if (!(e.t_final > 0.0) || !(e.dt > 0.0) || e.stride < 1) {
            throw ConfigError("config: evolve needs t_final > 0, dt > 0, stride >= 1");
        }
        c.evolve = e;
    }

    const Section out(tree, "output", {"path", "format"});
    if (auto v = out.get("path")) c.output_path = *v;
    if (auto v = out.get("format")) {
        if (*v == "csv") c.format = OutputFormat::csv;
        else if (*v == "json") c.format = OutputFormat::json;
        else throw ConfigError("config: output.format must be csv or json");
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    return parse_config(in);
}

// ------------------------------------ output ------------------------------------

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) return "0"; // folds -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

std::string render_csv(const Table& table) {
    std::ostringstream out;
    out << "# config: " << table.config_line << '\n';
    for (const auto& [k, v] : table.metadata) out << "# " << k << ": " << v << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << render_cell_csv(row[i]);
        out << '\n';
    }
    return out.str();
}

std::string render_json(const Table& table) {
    nlohmann::ordered_json j;
    j["config"] = nlohmann::ordered_json::parse(table.config_line);
    j["metadata"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : table.metadata) j["metadata"][k] = v;
    j["columns"] = table.columns;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        auto r = nlohmann::ordered_json::array();
        for (const auto& c : row) r.push_back(cell_json(c));
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    return j.dump(2) + "\n";
}

// ----------------------------------- commands -----------------------------------

Table cmd_spectrum(const RunConfig& config, bool include_full) {
    const AtomConfiguration atoms = config.build();
    Table t = base_table(config);
    t.metadata.emplace_back("n_atoms", std::to_string(atoms.size()));
    t.metadata.emplace_back("min_separation", format_number(atoms.size() > 1 ? atoms.min_separation() : 0.0));
    t.columns = {"kind", "index", "eigenvalue", "lifetime"};

    auto emit = [&](const char* kind, const RealVector& values) {
        for (Eigen::Index i = 0; i < values.size(); ++i) {
            const double v = values(i);
            t.rows.push_back({std::string(kind), static_cast<long>(i + 1), v,
                              v > 0.0 ? number_or_empty(config.gamma0 / v) : Cell{}});
        }
    };
    emit("reduced", symmetric_eig(reduced_matrix(atoms)).eigenvalues);
    if (include_full) {
        if (atoms.size() > max_particles) {
            throw ConfigError("spectrum: --full needs at most " + std::to_string(max_particles) + " atoms");
        }
        emit("full", hermitian_eig(full_gamma(atoms)).eigenvalues);
    }
    return t;
}

Table cmd_scan(const RunConfig& config) {
    if (!config.scan) throw ConfigError("scan: configuration has no [scan] section");
    const ScanSpec& scan = *config.scan;
    const std::vector<double> values = scan_values(scan);

    // Grid points are independent; results land in their own slots.
    std::vector<RealVector> spectra(values.size());
    const std::size_t workers =
        std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, values.size());
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w) {
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < values.size(); i += workers) {
                spectra[i] = symmetric_eig(reduced_matrix(config.build_with(scan.parameter, values[i]))).eigenvalues;
            }
        }));
    }
    for (auto& j : jobs) j.get();

    Eigen::Index width = 0;
    for (const auto& s : spectra) width = std::max(width, s.size());
    Table t = base_table(config);
    t.metadata.emplace_back("points", std::to_string(values.size()));
    t.columns.push_back(scan.parameter);
    for (Eigen::Index i = 0; i < width; ++i) t.columns.push_back("eigenvalue_" + std::to_string(i + 1));
    for (std::size_t p = 0; p < values.size(); ++p) {
        std::vector<Cell> row;
        if (scan.parameter == "n") row.emplace_back(static_cast<long>(std::lround(values[p])));
        else row.emplace_back(values[p]);
        for (Eigen::Index i = 0; i < width; ++i) {
            row.push_back(i < spectra[p].size() ? Cell{spectra[p](i)} : Cell{});
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table cmd_evolve(const RunConfig& config) {
    if (!config.evolve) throw ConfigError("evolve: configuration has no [evolve] section");
    const EvolveSpec& spec = *config.evolve;
    const AtomConfiguration atoms = config.build();
    const LindbladModel model = atomic_model(atoms);
    const DensityMatrix rho0 = DensityMatrix::pure(initial_state(atoms, spec.initial));

    EvolveOptions options;
    options.stride = spec.stride;
    const EvolutionResult result = evolve(model, rho0, spec.t_final, spec.dt, options);

    Table t = base_table(config);
    t.metadata.emplace_back("trace_drift", format_number(result.trace_drift));
    if (spec.fit) {
        const double peak = *std::max_element(result.excited_population.begin(), result.excited_population.end());
        if (peak <= 0.0) {
            t.metadata.emplace_back("fitted_decay_rate", format_number(0.0));
        } else {
            const auto window = default_fit_window(result);
            double rate = 0.0;
            try {
                rate = fit_decay_rate(result, window);
            } catch (const ConfigError& e) {
                throw NumericalError(std::string("evolve: decay fit failed: ") + e.what());
            }
            t.metadata.emplace_back("fitted_decay_rate", format_number(rate));
            t.metadata.emplace_back("fit_window", format_number(window.first) + " " + format_number(window.second));
        }
    }
    t.columns = {"time", "excited_population", "purity"};
    for (std::size_t i = 0; i < result.times.size(); ++i) {
        t.rows.push_back({result.times[i], result.excited_population[i], result.purity[i]});
    }
    return t;
}

VerifyOutcome cmd_verify(const RunConfig& config, double tol) {
    VerifyOutcome out;
    Table& t = out.table;
    t = base_table(config);
    t.metadata.emplace_back("tol", format_number(tol));
    t.columns = {"check", "status", "value", "threshold", "detail"};
    bool all = true;
    auto add = [&](const std::string& check, const std::string& status, Cell value, Cell threshold,
                   const std::string& detail) {
        if (status == "fail" || status == "rejected") all = false;
        t.rows.push_back({check, status, std::move(value), std::move(threshold), detail});
    };

    // Plane-wave independence on the resonant sphere; duplicates cost one rank each.
    const std::vector<Vec3> raw = config.atom_positions();
    {
        std::vector<Vec3> distinct;
        for (const auto& p : raw) {
            if (std::none_of(distinct.begin(), distinct.end(), [&](const Vec3& q) { return (p - q).norm() <= 1e-12; })) {
                distinct.push_back(p);
            }
        }
        const int n = static_cast<int>(raw.size());
        const GramReport g = gram_rank_check(raw, k0, samples_per_function * n);
        const double ratio = g.singular_values.back() / g.singular_values.front();
        const bool ok = g.rank_at_tol == static_cast<int>(distinct.size());
        add("gram_rank", ok ? "pass" : "fail", static_cast<long>(g.rank_at_tol),
            static_cast<long>(distinct.size()),
            "functions=" + std::to_string(n) + " sigma_min/sigma_max=" + format_number(ratio));
    }

    std::optional<AtomConfiguration> atoms;
    try {
        atoms = config.build();
    } catch (const ConfigError& e) {
        for (const char* check : {"manifold_spectra", "min_eigenvalue", "dicke_convergence", "ipdfs"}) {
            add(check, "rejected", Cell{}, Cell{}, e.what());
        }
        out.all_passed = false;
        return out;
    }

    if (atoms->size() <= max_particles) {
        const ManifoldSpectraReport d = verify_manifold_spectra(*atoms, tol);
        add("manifold_spectra", d.passed ? "pass" : "fail", d.max_error(), tol,
            "predicted_values=" + std::to_string(2 * d.n) + " full_dim=" + std::to_string(d.full_spectrum.size()));
    } else {
        add("manifold_spectra", "skipped", Cell{}, Cell{}, "atom count above full-operator cap");
    }

    if (atoms->dicke()) {
        add("min_eigenvalue", "skipped", Cell{}, Cell{}, "Dicke-limit configuration");
        add("dicke_convergence", "skipped", Cell{}, Cell{}, "Dicke-limit configuration");
    } else {
        const double m = min_nontrivial_eigenvalue(*atoms);
        add("min_eigenvalue", m > 1e-12 ? "pass" : "fail", m, 1e-12, "strictly positive away from the Dicke limit");
        if (atoms->size() > 1) {
            const Vec3 centroid = [&] {
                Vec3 c = Vec3::Zero();
                for (const auto& p : atoms->positions()) c += p;
                return Vec3(c / atoms->size());
            }();
            const GeometryFamily shrink = [&](double s) {
                std::vector<Vec3> pos;
                for (const auto& p : atoms->positions()) pos.push_back(centroid + s * (p - centroid));
                return AtomConfiguration(pos, atoms->dipole(), atoms->gamma0());
            };
            std::vector<double> scales;
            for (int i = 0; i <= 8; ++i) scales.push_back(std::pow(10.0, -0.25 * i));
            const DickeTable d = dicke_convergence(shrink, scales);
            const double first = d.rows.front().min_eigenvalue, last = d.rows.back().min_eigenvalue;
            const bool ok = d.all_positive && last < first;
            add("dicke_convergence", ok ? "pass" : "fail", last, first,
                std::string("scale 1 -> 0.01, monotone=") + (d.monotone ? "true" : "false"));
        } else {
            add("dicke_convergence", "skipped", Cell{}, Cell{}, "single atom");
        }
    }

    if (atoms->size() <= ipdfs_cap) {
        const LindbladModel model = atomic_model(*atoms);
        const DFSReport r = find_ipdfs(model);
        double worst = 0.0;
        bool pure_condition = true;
        for (int i = 0; i < r.kernel_dim; ++i) {
            worst = std::max(worst, r.dissipator_norms[static_cast<std::size_t>(i)]);
            const auto p = verify_pure_state_condition(model, r.basis.col(i));
            pure_condition = pure_condition && p.holds;
        }
        const double bound = 1e-9 * std::max(r.gamma_norm, 1e-300);
        const bool ok = worst <= bound && pure_condition;
        add("ipdfs", ok ? "pass" : "fail", static_cast<long>(r.kernel_dim), Cell{},
            "kernel_dim=" + std::to_string(r.kernel_dim) + " max_dissipator_norm=" + format_number(worst));
    } else {
        add("ipdfs", "skipped", Cell{}, Cell{}, "atom count above IPDFS cap");
    }

    out.all_passed = all;
    return out;
}

// ------------------------------------ entry ------------------------------------

int run(int argc, char** argv) {
    CLI::App app{"dfslab: collective decay spectra and decoherence-free subspaces of two-level atoms"};
    app.require_subcommand(1);

    std::string config_path, out_path, format;
    bool full = false;
    double tol = 1e-9;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "configuration file")->required();
        sub->add_option("--out", out_path, "output file (default: config output.path, else stdout)");
        sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    };
    auto* spectrum = app.add_subcommand("spectrum", "reduced (and optionally full) decay spectrum");
    add_common(spectrum);
    spectrum->add_flag("--full", full, "also diagonalize the full 2^N operator");
    auto* scan = app.add_subcommand("scan", "reduced spectrum along a geometry parameter");
    add_common(scan);
    auto* evolve_cmd = app.add_subcommand("evolve", "integrate the master equation");
    add_common(evolve_cmd);
    auto* verify = app.add_subcommand("verify", "run the numerical witnesses");
    add_common(verify);
    verify->add_option("--tol", tol, "absolute tolerance for spectral checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config_error;
    }

    try {
        RunConfig config = load_config(config_path);
        if (!format.empty()) config.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
        if (!out_path.empty()) config.output_path = out_path;

        Table table;
        int code = exit_ok;
        if (*spectrum) {
            table = cmd_spectrum(config, full);
        } else if (*scan) {
            table = cmd_scan(config);
        } else if (*evolve_cmd) {
            table = cmd_evolve(config);
        } else {
            VerifyOutcome v = cmd_verify(config, tol);
            table = std::move(v.table);
            if (!v.all_passed) code = exit_verification_failed;
        }

        const std::string text = config.format == OutputFormat::json ? render_json(table) : render_csv(table);
        if (config.output_path.empty()) {
            std::cout << text;
        } else {
            std::ofstream f(config.output_path, std::ios::binary);
            if (!f) throw ConfigError("cannot open output file '" + config.output_path + "'");
            f << text;
        }
        return code;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const StabilityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_stability_guard;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_numerical_error;
    }
}

} // namespace dfslab::cli
