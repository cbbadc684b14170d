#include "afc/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

namespace afc {

namespace {

using Section = std::map<std::string, std::string>;

const std::map<std::string, std::set<std::string>>& allowed_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"comb", {"m", "delta_nu_mhz", "nu_c_mhz", "n_prime", "envelope", "omega0_mhz", "lambda_mhz"}},
        {"basis", {"photon_cutoff", "exc_cutoff", "frame"}},
        {"losses", {"kappa_mhz", "gamma_h_mhz", "gamma_p_mhz", "dephasing_convention"}},
        {"state", {"kind", "alpha_re", "alpha_im", "beta_re", "beta_im", "coeffs", "coeffs_im", "tail_tolerance"}},
        {"time", {"t_end_ns", "n_snapshots", "rtol"}},
        {"method", {"kind", "n_traj", "seed", "dense_max_dim", "write_density"}},
        {"spectrum", {"max_sector", "spacing_mode", "band_gap_mhz"}},
        {"wigner", {"re_min", "re_max", "im_min", "im_max", "resolution", "times_ns", "t_rev_multiples"}},
        {"revivals", {"count", "t_rev_ns", "samples_per_revival", "fidelity_convention"}},
        {"sweep",
         {"lambda_min_mhz", "lambda_max_mhz", "n_points", "samples_per_revival", "allow_losses", "optimize",
          "spacing_mode", "band_gap_mhz"}},
        {"run", {"seed", "threads", "out"}},
    };
    return keys;
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    s = s.substr(b, e - b + 1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
        s = s.substr(1, s.size() - 2);
    }
    return s;
}

class Reader {
public:
    explicit Reader(std::map<std::string, Section> sections) : sections_(std::move(sections)) {}

    const std::string* raw(const std::string& section, const std::string& key) const {
        const auto s = sections_.find(section);
        if (s == sections_.end()) {
            return nullptr;
        }
        const auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    }

    bool has(const std::string& section, const std::string& key) const { return raw(section, key) != nullptr; }

    double real(const std::string& section, const std::string& key, double fallback) const {
        const std::string* v = raw(section, key);
        return v ? parse_real(*v, section + "." + key) : fallback;
    }

    long long integer(const std::string& section, const std::string& key, long long fallback) const {
        const std::string* v = raw(section, key);
        if (!v) {
            return fallback;
        }
        long long out = 0;
        const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
        if (ec != std::errc{} || ptr != v->data() + v->size()) {
            throw ValidationError(fmt::format("{}.{} must be an integer, got '{}'", section, key, *v));
        }
        return out;
    }

    std::uint64_t unsigned64(const std::string& section, const std::string& key, std::uint64_t fallback) const {
        const std::string* v = raw(section, key);
        if (!v) {
            return fallback;
        }
        std::uint64_t out = 0;
        const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
        if (ec != std::errc{} || ptr != v->data() + v->size()) {
            throw ValidationError(fmt::format("{}.{} must be an unsigned integer, got '{}'", section, key, *v));
        }
        return out;
    }

    bool boolean(const std::string& section, const std::string& key, bool fallback) const {
        const std::string* v = raw(section, key);
        if (!v) {
            return fallback;
        }
        if (*v == "true" || *v == "1") {
            return true;
        }
        if (*v == "false" || *v == "0") {
            return false;
        }
        throw ValidationError(fmt::format("{}.{} must be true or false, got '{}'", section, key, *v));
    }

    std::string word(const std::string& section, const std::string& key, const std::string& fallback,
                     std::initializer_list<const char*> choices) const {
        const std::string* v = raw(section, key);
        if (!v) {
            return fallback;
        }
        for (const char* c : choices) {
            if (*v == c) {
                return *v;
            }
        }
        std::string list;
        for (const char* c : choices) {
            list += list.empty() ? c : std::string("|") + c;
        }
        throw ValidationError(fmt::format("{}.{} must be one of {}, got '{}'", section, key, list, *v));
    }

    std::vector<double> reals(const std::string& section, const std::string& key) const {
        const std::string* v = raw(section, key);
        std::vector<double> out;
        if (!v) {
            return out;
        }
        std::stringstream ss(*v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            out.push_back(parse_real(trim(item), section + "." + key));
        }
        return out;
    }

private:
    static double parse_real(const std::string& text, const std::string& field) {
        double out = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
        if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(out)) {
            throw ValidationError(fmt::format("{} must be a finite number, got '{}'", field, text));
        }
        return out;
    }

    std::map<std::string, Section> sections_;
};

void require(bool ok, const std::string& message) {
    if (!ok) {
        throw ValidationError(message);
    }
}

} // namespace

CombSpec CombSection::build() const {
    const Envelope env = envelope == Envelope::Kind::uniform ? Envelope::uniform(omega0_mhz)
                                                              : Envelope::gaussian(omega0_mhz, lambda_mhz);
    return CombSpec::build(m, delta_nu_mhz, nu_c_mhz, n_prime, env);
}

RunConfig parse_config(const std::string& text) {
    boost::property_tree::ptree tree;
    std::istringstream in(text);
    try {
        boost::property_tree::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ValidationError(fmt::format("config: {} (line {})", e.message(), e.line()));
    }

    std::map<std::string, Section> sections;
    for (const auto& [name, body] : tree) {
        const auto allowed = allowed_keys().find(name);
        if (!body.data().empty()) {
            throw ValidationError(fmt::format("config: key '{}' outside of any section", name));
        }
        if (allowed == allowed_keys().end()) {
            throw ValidationError(fmt::format("config: unknown section [{}]", name));
        }
        for (const auto& [key, value] : body) {
            if (!allowed->second.contains(key)) {
                throw ValidationError(fmt::format("{}.{}: unknown key", name, key));
            }
            sections[name][key] = trim(value.data());
        }
    }
    const Reader r(std::move(sections));
    RunConfig c;

    c.comb.m = static_cast<int>(r.integer("comb", "m", c.comb.m));
    c.comb.delta_nu_mhz = r.real("comb", "delta_nu_mhz", c.comb.delta_nu_mhz);
    c.comb.nu_c_mhz = r.real("comb", "nu_c_mhz", c.comb.nu_c_mhz);
    c.comb.n_prime = static_cast<int>(r.integer("comb", "n_prime", c.comb.n_prime));
    c.comb.envelope = r.word("comb", "envelope", "gaussian", {"uniform", "gaussian"}) == "uniform"
                          ? Envelope::Kind::uniform
                          : Envelope::Kind::gaussian;
    c.comb.omega0_mhz = r.real("comb", "omega0_mhz", c.comb.omega0_mhz);
    c.comb.lambda_mhz = r.real("comb", "lambda_mhz", c.comb.lambda_mhz);
    require(c.comb.nu_c_mhz >= 0.0, "comb.nu_c_mhz must be >= 0");
    (void)c.comb.build();

    c.basis.photon_cutoff = static_cast<int>(r.integer("basis", "photon_cutoff", -1));
    c.basis.exc_cutoff = static_cast<int>(r.integer("basis", "exc_cutoff", -1));
    c.basis.frame = r.word("basis", "frame", "rotating", {"rotating", "lab"}) == "lab" ? Frame::lab : Frame::rotating;
    require(c.basis.photon_cutoff >= -1 && c.basis.photon_cutoff <= 255, "basis.photon_cutoff must be in [0, 255]");
    require(c.basis.exc_cutoff >= -1 && c.basis.exc_cutoff <= 255, "basis.exc_cutoff must be in [0, 255]");

    c.losses.kappa_mhz = r.real("losses", "kappa_mhz", 0.0);
    c.losses.gamma_h_mhz = r.real("losses", "gamma_h_mhz", 0.0);
    c.losses.gamma_p_mhz = r.real("losses", "gamma_p_mhz", 0.0);
    c.losses.validate();
    c.dephasing = r.word("losses", "dephasing_convention", "paper", {"paper", "half"}) == "half"
                      ? DephasingConvention::half
                      : DephasingConvention::paper;

    const std::string kind = r.word("state", "kind", "fock", {"fock", "coherent", "cat", "superposition"});
    if (kind == "coherent") {
        require(r.has("state", "alpha_re") || r.has("state", "alpha_im"), "state.alpha_re is required for kind = coherent");
        c.state.spec = cavity_state::Coherent{Complex(r.real("state", "alpha_re", 0.0), r.real("state", "alpha_im", 0.0))};
    } else if (kind == "cat") {
        require(r.has("state", "beta_re") || r.has("state", "beta_im"), "state.beta_re is required for kind = cat");
        c.state.spec = cavity_state::Cat{Complex(r.real("state", "beta_re", 0.0), r.real("state", "beta_im", 0.0))};
    } else if (kind == "superposition") {
        c.state.spec = cavity_state::FourLevelSuperposition{};
    } else if (r.has("state", "coeffs")) {
        const auto re = r.reals("state", "coeffs");
        auto im = r.reals("state", "coeffs_im");
        require(im.empty() || im.size() == re.size(), "state.coeffs_im must have as many entries as state.coeffs");
        im.resize(re.size(), 0.0);
        std::vector<Complex> amps(re.size());
        double norm = 0.0;
        for (std::size_t i = 0; i < re.size(); ++i) {
            amps[i] = Complex(re[i], im[i]);
            norm += std::norm(amps[i]);
        }
        require(norm > 0.0, "state.coeffs must not all be zero");
        c.state.spec = cavity_state::Fock{std::move(amps)};
    }
    c.state.tail_tolerance = r.real("state", "tail_tolerance", kDefaultTailTolerance);
    require(c.state.tail_tolerance > 0.0 && c.state.tail_tolerance < 1.0, "state.tail_tolerance must be in (0, 1)");

    c.time.t_end_ns = r.real("time", "t_end_ns", c.time.t_end_ns);
    const long long n_snap = r.integer("time", "n_snapshots", static_cast<long long>(c.time.n_snapshots));
    c.time.rtol = r.real("time", "rtol", c.time.rtol);
    require(c.time.t_end_ns > 0.0, "time.t_end_ns must be > 0");
    require(n_snap >= 2, "time.n_snapshots must be >= 2");
    require(c.time.rtol > 0.0 && c.time.rtol < 1e-2, "time.rtol must be in (0, 1e-2)");
    c.time.n_snapshots = static_cast<std::size_t>(n_snap);

    const std::string method = r.word("method", "kind", "closed", {"closed", "dense", "trajectories"});
    c.method.kind = method == "dense" ? Method::dense : method == "trajectories" ? Method::trajectories : Method::closed;
    const long long n_traj = r.integer("method", "n_traj", static_cast<long long>(c.method.n_traj));
    require(n_traj >= 1, "method.n_traj must be >= 1");
    c.method.n_traj = static_cast<std::size_t>(n_traj);
    const long long max_dim = r.integer("method", "dense_max_dim", static_cast<long long>(c.method.dense_max_dim));
    require(max_dim >= 1, "method.dense_max_dim must be >= 1");
    c.method.dense_max_dim = static_cast<std::size_t>(max_dim);
    c.method.write_density = r.boolean("method", "write_density", false);
    require(!(r.has("method", "seed") && r.has("run", "seed")), "method.seed and run.seed are both set");
    c.seed = r.unsigned64("method", "seed", r.unsigned64("run", "seed", 0));

    c.spectrum.max_sector = static_cast<int>(r.integer("spectrum", "max_sector", 2));
    require(c.spectrum.max_sector >= 1 && c.spectrum.max_sector <= 255, "spectrum.max_sector must be in [1, 255]");
    c.spectrum.spacing.mode =
        r.word("spectrum", "spacing_mode", "all", {"all", "bands"}) == "bands" ? SpacingMode::bands : SpacingMode::all;
    c.spectrum.spacing.band_gap_mhz = r.real("spectrum", "band_gap_mhz", 0.5 * c.comb.delta_nu_mhz);
    require(c.spectrum.spacing.band_gap_mhz > 0.0, "spectrum.band_gap_mhz must be > 0");

    c.wigner.grid.re_min = r.real("wigner", "re_min", -4.0);
    c.wigner.grid.re_max = r.real("wigner", "re_max", 4.0);
    c.wigner.grid.im_min = r.real("wigner", "im_min", -4.0);
    c.wigner.grid.im_max = r.real("wigner", "im_max", 4.0);
    const long long res = r.integer("wigner", "resolution", 81);
    require(res >= 2 && res <= 2001, "wigner.resolution must be in [2, 2001]");
    c.wigner.grid.resolution = static_cast<int>(res);
    require(c.wigner.grid.re_max > c.wigner.grid.re_min, "wigner.re_max must exceed wigner.re_min");
    require(c.wigner.grid.im_max > c.wigner.grid.im_min, "wigner.im_max must exceed wigner.im_min");
    c.wigner.times_ns = r.reals("wigner", "times_ns");
    c.wigner.t_rev_multiples = r.reals("wigner", "t_rev_multiples");
    if (c.wigner.times_ns.empty() && c.wigner.t_rev_multiples.empty()) {
        c.wigner.t_rev_multiples = {0.0, 1.0};
    }
    for (double t : c.wigner.times_ns) {
        require(t >= 0.0, "wigner.times_ns entries must be >= 0");
    }
    for (double k : c.wigner.t_rev_multiples) {
        require(k >= 0.0, "wigner.t_rev_multiples entries must be >= 0");
    }

    c.revivals.count = static_cast<int>(r.integer("revivals", "count", 4));
    c.revivals.t_rev_ns = r.real("revivals", "t_rev_ns", 0.0);
    c.revivals.samples_per_revival = static_cast<int>(r.integer("revivals", "samples_per_revival", 400));
    c.revivals.convention =
        r.word("revivals", "fidelity_convention", "root", {"root", "squared_overlap"}) == "squared_overlap"
            ? FidelityConvention::squared_overlap
            : FidelityConvention::root;
    require(c.revivals.count >= 1 && c.revivals.count <= 100, "revivals.count must be in [1, 100]");
    require(c.revivals.t_rev_ns >= 0.0, "revivals.t_rev_ns must be >= 0");
    require(c.revivals.samples_per_revival >= 20, "revivals.samples_per_revival must be >= 20");

    c.sweep.lambda_min_mhz = r.real("sweep", "lambda_min_mhz", 100.0);
    c.sweep.lambda_max_mhz = r.real("sweep", "lambda_max_mhz", 1000.0);
    const long long n_points = r.integer("sweep", "n_points", 46);
    c.sweep.samples_per_revival = static_cast<int>(r.integer("sweep", "samples_per_revival", 400));
    c.sweep.allow_losses = r.boolean("sweep", "allow_losses", false);
    c.sweep.optimize = r.boolean("sweep", "optimize", true);
    c.sweep.spacing.mode =
        r.word("sweep", "spacing_mode", "bands", {"all", "bands"}) == "all" ? SpacingMode::all : SpacingMode::bands;
    c.sweep.spacing.band_gap_mhz = r.real("sweep", "band_gap_mhz", 0.5 * c.comb.delta_nu_mhz);
    require(c.sweep.lambda_min_mhz > 0.0, "sweep.lambda_min_mhz must be > 0");
    require(c.sweep.lambda_max_mhz > c.sweep.lambda_min_mhz, "sweep.lambda_max_mhz must exceed sweep.lambda_min_mhz");
    require(n_points >= 1 && n_points <= 100000, "sweep.n_points must be in [1, 100000]");
    require(c.sweep.samples_per_revival >= 20, "sweep.samples_per_revival must be >= 20");
    require(c.sweep.spacing.band_gap_mhz > 0.0, "sweep.band_gap_mhz must be > 0");
    c.sweep.n_points = static_cast<std::size_t>(n_points);

    const long long threads = r.integer("run", "threads", 1);
    require(threads >= 1 && threads <= 1024, "run.threads must be in [1, 1024]");
    c.threads = static_cast<unsigned>(threads);
    if (const std::string* out = r.raw("run", "out")) {
        require(!out->empty(), "run.out must not be empty");
        c.out_dir = *out;
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError(fmt::format("config: cannot read '{}'", path));
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_hash(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return fmt::format("{:016x}", h);
}

} // namespace afc
