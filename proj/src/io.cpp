#include "fspde/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>
#include <unistd.h>

#include "fspde/errors.hpp"

namespace fspde::io {
namespace {

constexpr char kMagic[8] = {'F', 'S', 'P', 'D', 'E', 'F', '1', '\0'};

template <class T>
void put_le(std::string& out, T v) {
    static_assert(std::endian::native == std::endian::little, "little-endian host required");
    char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    out.append(b, sizeof(T));
}

template <class T>
T get_le(const std::string& in, std::size_t off) {
    T v;
    std::memcpy(&v, in.data() + off, sizeof(T));
    return v;
}

std::string child(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }

const json& member(const json& obj, const std::string& ptr, const std::string& key) {
    if (!obj.is_object()) throw ConfigError(ptr, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(child(ptr, key), "required key is missing");
    return *it;
}

double number(const json& obj, const std::string& ptr, const std::string& key,
              std::optional<double> fallback = std::nullopt) {
    if (!obj.is_object()) throw ConfigError(ptr, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) {
        if (fallback) return *fallback;
        throw ConfigError(child(ptr, key), "required key is missing");
    }
    if (!it->is_number()) throw ConfigError(child(ptr, key), "expected a number");
    const double v = it->get<double>();
    if (!std::isfinite(v)) throw ConfigError(child(ptr, key), "expected a finite number");
    return v;
}

int integer(const json& obj, const std::string& ptr, const std::string& key, std::optional<int> fallback = std::nullopt) {
    if (!obj.is_object()) throw ConfigError(ptr, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) {
        if (fallback) return *fallback;
        throw ConfigError(child(ptr, key), "required key is missing");
    }
    if (!it->is_number_integer()) throw ConfigError(child(ptr, key), "expected an integer");
    return it->get<int>();
}

void only_keys(const json& obj, const std::string& ptr, std::initializer_list<const char*> keys) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : keys) known = known || it.key() == k;
        if (!known) throw ConfigError(child(ptr, it.key()), "unknown key");
    }
}

std::string param_pointer(const std::string& violation) {
    if (violation.find("beta1") != std::string::npos) return "/params/beta1";
    if (violation.find("beta2") != std::string::npos) return "/params/beta2";
    if (violation.find("kappa") != std::string::npos) return "/params/kappa";
    if (violation.find("gamma") != std::string::npos) return "/params/gamma";
    if (violation.find("alpha") != std::string::npos) return "/params/alpha";
    return "/params/p";
}

ProblemParams parse_params(const json& p) {
    only_keys(p, "/params", {"alpha", "beta1", "beta2", "p", "gamma", "kappa"});
    ProblemParams out;
    out.alpha = number(p, "/params", "alpha");
    out.beta1 = number(p, "/params", "beta1");
    out.beta2 = number(p, "/params", "beta2");
    out.p = number(p, "/params", "p", 2.0);
    out.gamma = number(p, "/params", "gamma", 0.0);
    out.kappa = number(p, "/params", "kappa", 0.01);
    if (const std::string v = out.violation(); !v.empty()) throw ConfigError(param_pointer(v), v);
    return out;
}

LevySpec parse_levy(const json& l, const std::string& ptr) {
    only_keys(l, ptr, {"lambda", "law", "sigma", "d1", "K"});
    LevySpec s;
    s.lambda = number(l, ptr, "lambda", 1.0);
    s.sigma = number(l, ptr, "sigma", 1.0);
    s.d1 = integer(l, ptr, "d1", 1);
    s.copies = integer(l, ptr, "K", 1);
    if (l.contains("law")) {
        if (!l["law"].is_string()) throw ConfigError(child(ptr, "law"), "expected a string");
        try {
            s.law = parse_jump_law(l["law"].get<std::string>());
        } catch (const Error& err) {
            throw ConfigError(child(ptr, "law"), err.what());
        }
    }
    if (!(s.lambda > 0.0)) throw ConfigError(child(ptr, "lambda"), "lambda must be positive");
    if (!(s.sigma > 0.0)) throw ConfigError(child(ptr, "sigma"), "sigma must be positive");
    if (s.d1 < 1) throw ConfigError(child(ptr, "d1"), "d1 must be >= 1");
    if (s.copies < 1) throw ConfigError(child(ptr, "K"), "K must be >= 1");
    return s;
}

SemilinearMap make_map(const json& spec, const std::string& ptr) {
    only_keys(spec, ptr, {"kind", "c"});
    const json& kind = member(spec, ptr, "kind");
    if (!kind.is_string()) throw ConfigError(child(ptr, "kind"), "expected a string");
    const double c = number(spec, ptr, "c");
    const std::string k = kind.get<std::string>();
    SemilinearMap m;
    m.lipschitz = std::abs(c);
    if (k == "linear")
        m.map = [c](double u) { return c * u; };
    else if (k == "sin")
        m.map = [c](double u) { return c * std::sin(u); };
    else if (k == "tanh")
        m.map = [c](double u) { return c * std::tanh(u); };
    else
        throw ConfigError(child(ptr, "kind"), "expected linear, sin or tanh");
    return m;
}

std::vector<Field> field_list(const json& spec, const TorusGrid& grid, std::size_t count, const std::string& ptr) {
    std::vector<Field> out;
    if (spec.is_array()) {
        if (spec.size() != count) {
            std::ostringstream os;
            os << "expected " << count << " entries, found " << spec.size();
            throw ConfigError(ptr, os.str());
        }
        for (std::size_t i = 0; i < spec.size(); ++i)
            out.push_back(field_from_spec(spec[i], grid, ptr + "/" + std::to_string(i)));
    } else {
        const Field f = field_from_spec(spec, grid, ptr);
        out.assign(count, f);
    }
    return out;
}

}  // namespace

void atomic_write(const std::filesystem::path& path, const std::string& bytes) {
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) throw Error("write to " + tmp.string() + " failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string encode_field(const Field& f) {
    std::string out(kMagic, sizeof(kMagic));
    put_le<std::int64_t>(out, f.grid.d);
    put_le<std::int64_t>(out, f.grid.n);
    put_le<double>(out, f.grid.length);
    out.reserve(out.size() + 8 * f.values.size());
    for (double v : f.values) put_le<double>(out, v);
    return out;
}

Field decode_field(const std::string& bytes) {
    if (bytes.size() < 32 || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
        throw SizeError("not a field file (bad magic)");
    TorusGrid g;
    g.d = static_cast<int>(get_le<std::int64_t>(bytes, 8));
    g.n = static_cast<int>(get_le<std::int64_t>(bytes, 16));
    g.length = get_le<double>(bytes, 24);
    g.validate();
    if (bytes.size() != 32 + 8 * g.size()) throw SizeError("field file length does not match its header");
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = get_le<double>(bytes, 32 + 8 * i);
    return {g, std::move(v)};
}

void write_field(const std::filesystem::path& path, const Field& f) { atomic_write(path, encode_field(f)); }
Field read_field(const std::filesystem::path& path) { return decode_field(read_file(path)); }

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out += ',';
        out += header[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_double(row[i]);
        }
        out += '\n';
    }
    return out;
}

std::string canonical_dump(const json& j) { return j.dump(); }

std::string digest(const json& j) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical_dump(j)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Field field_from_spec(const json& spec, const TorusGrid& grid, const std::string& ptr) {
    const double k = 2.0 * std::numbers::pi / grid.length;
    Field f(grid);
    std::vector<double> x(grid.d);
    if (spec.is_null()) return f;
    if (spec.is_string()) {
        const std::string name = spec.get<std::string>();
        for (std::size_t i = 0; i < grid.size(); ++i) {
            grid.position(i, x.data());
            double v = 0.0;
            if (name == "zero") {
                v = 0.0;
            } else if (name == "cos1") {
                v = std::cos(k * x[0]);
            } else if (name == "sin2") {
                v = std::sin(2.0 * k * x[0]);
            } else if (name == "bump") {
                double s = 0.0;
                for (double xi : x) s += std::cos(k * xi);
                v = std::exp(s);
            } else {
                throw ConfigError(ptr, "unknown field preset '" + name + "' (zero, cos1, sin2, bump)");
            }
            f.values[i] = v;
        }
        return f;
    }
    if (!spec.is_object()) throw ConfigError(ptr, "expected a preset name or {\"modes\": [...]}");
    only_keys(spec, ptr, {"modes"});
    const json& modes = member(spec, ptr, "modes");
    if (!modes.is_array()) throw ConfigError(child(ptr, "modes"), "expected an array");
    for (std::size_t m = 0; m < modes.size(); ++m) {
        const std::string mp = ptr + "/modes/" + std::to_string(m);
        only_keys(modes[m], mp, {"k", "cos", "sin"});
        const json& kv = member(modes[m], mp, "k");
        if (!kv.is_array() || static_cast<int>(kv.size()) != grid.d)
            throw ConfigError(child(mp, "k"), "expected an integer wave vector of length d");
        std::vector<int> wave(grid.d);
        for (int i = 0; i < grid.d; ++i) {
            if (!kv[i].is_number_integer()) throw ConfigError(child(mp, "k") + "/" + std::to_string(i), "expected an integer");
            wave[i] = kv[i].get<int>();
            if (std::abs(wave[i]) >= grid.n / 2)
                throw ConfigError(child(mp, "k") + "/" + std::to_string(i), "wave number not below N/2");
        }
        const double a = number(modes[m], mp, "cos", 0.0);
        const double b = number(modes[m], mp, "sin", 0.0);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            grid.position(i, x.data());
            double ph = 0.0;
            for (int r = 0; r < grid.d; ++r) ph += k * wave[r] * x[r];
            f.values[i] += a * std::cos(ph) + b * std::sin(ph);
        }
    }
    return f;
}

Experiment parse_experiment(const json& doc) {
    if (!doc.is_object()) throw ConfigError("", "config must be a JSON object");
    only_keys(doc, "", {"params", "grid", "time", "noise", "data", "seeds", "solver", "verify"});
    Experiment e;
    e.raw = doc;

    e.params = parse_params(member(doc, "", "params"));

    const json empty = json::object();
    const json& g = doc.contains("grid") ? doc["grid"] : empty;
    only_keys(g, "/grid", {"d", "N", "L"});
    e.grid.d = integer(g, "/grid", "d", 1);
    e.grid.n = integer(g, "/grid", "N", 64);
    e.grid.length = number(g, "/grid", "L", 2.0 * std::numbers::pi);
    if (e.grid.d < 1 || e.grid.d > 3) throw ConfigError("/grid/d", "d must be 1, 2 or 3");
    if (e.grid.n < 8 || e.grid.n % 2) throw ConfigError("/grid/N", "N must be even and >= 8");
    if (!(e.grid.length > 0.0)) throw ConfigError("/grid/L", "L must be positive");

    const json& t = doc.contains("time") ? doc["time"] : empty;
    only_keys(t, "/time", {"T", "steps"});
    e.time.tmax = number(t, "/time", "T", 1.0);
    e.time.n = integer(t, "/time", "steps", 64);
    if (!(e.time.tmax > 0.0)) throw ConfigError("/time/T", "T must be positive");
    if (e.time.n < 2) throw ConfigError("/time/steps", "steps must be >= 2");

    if (doc.contains("noise")) {
        const json& n = doc["noise"];
        only_keys(n, "/noise", {"levy", "wiener", "white"});
        if (n.contains("levy")) e.levy = parse_levy(n["levy"], "/noise/levy");
        if (n.contains("wiener")) {
            only_keys(n["wiener"], "/noise/wiener", {"K"});
            e.wiener_copies = integer(n["wiener"], "/noise/wiener", "K", 1);
            if (e.wiener_copies < 1) throw ConfigError("/noise/wiener/K", "K must be >= 1");
        }
        if (n.contains("white")) {
            only_keys(n["white"], "/noise/white", {"K"});
            e.white_basis = integer(n["white"], "/noise/white", "K");
            if (e.white_basis < 1) throw ConfigError("/noise/white/K", "K must be >= 1");
            if (e.white_basis > TrigBasis::capacity(e.grid))
                throw ConfigError("/noise/white/K", "K exceeds the number of resolved basis functions");
            if (!e.levy) throw ConfigError("/noise/levy", "white noise needs a levy spec");
            if (e.levy->d1 != 1) throw ConfigError("/noise/levy/d1", "white noise uses d1 = 1");
        }
    }

    if (doc.contains("seeds")) {
        const json& s = doc["seeds"];
        if (!s.is_array() || s.empty()) throw ConfigError("/seeds", "expected a non-empty array of integers");
        e.seeds.clear();
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (!s[i].is_number_unsigned() && !s[i].is_number_integer())
                throw ConfigError("/seeds/" + std::to_string(i), "expected a non-negative integer");
            if (s[i].is_number_integer() && s[i].get<long long>() < 0)
                throw ConfigError("/seeds/" + std::to_string(i), "expected a non-negative integer");
            e.seeds.push_back(s[i].get<std::uint64_t>());
        }
    }
    if (doc.contains("solver")) {
        const json& s = doc["solver"];
        only_keys(s, "/solver", {"picard_tol", "max_iter"});
        e.solver.picard_tol = number(s, "/solver", "picard_tol", 1e-8);
        e.solver.max_iter = integer(s, "/solver", "max_iter", 50);
        if (!(e.solver.picard_tol > 0.0)) throw ConfigError("/solver/picard_tol", "must be positive");
        if (e.solver.max_iter < 1) throw ConfigError("/solver/max_iter", "must be >= 1");
    }
    e.data = doc.contains("data") ? doc["data"] : json::object();
    if (!e.data.is_object()) throw ConfigError("/data", "expected an object");
    only_keys(e.data, "/data", {"u0", "v0", "f", "g", "h", "maps"});
    e.verify = doc.contains("verify") ? doc["verify"] : json::object();
    if (!e.verify.is_object()) throw ConfigError("/verify", "expected an object");
    // Build once so data errors surface at parse time.
    (void)build_problem(e);
    return e;
}

ProblemData build_problem(const Experiment& e) {
    ProblemData d;
    const json& data = e.data;
    d.u0 = data.contains("u0") ? field_from_spec(data["u0"], e.grid, "/data/u0") : Field(e.grid);
    if (data.contains("v0")) d.v0 = field_from_spec(data["v0"], e.grid, "/data/v0");
    if (data.contains("f") && !data["f"].is_null()) {
        const json& f = data["f"];
        only_keys(f, "/data/f", {"profile", "time"});
        const Field prof = field_from_spec(member(f, "/data/f", "profile"), e.grid, "/data/f/profile");
        std::string time = "const";
        if (f.contains("time")) {
            if (!f["time"].is_string()) throw ConfigError("/data/f/time", "expected a string");
            time = f["time"].get<std::string>();
        }
        std::function<double(double)> tf;
        if (time == "const")
            tf = [](double) { return 1.0; };
        else if (time == "linear")
            tf = [](double t) { return 1.0 + t; };
        else if (time == "cos")
            tf = [](double t) { return std::cos(std::numbers::pi * t); };
        else
            throw ConfigError("/data/f/time", "expected const, linear or cos");
        d.f = [prof, tf](double t, std::span<double> out) {
            const double s = tf(t);
            for (std::size_t i = 0; i < out.size(); ++i) out[i] = s * prof.values[i];
        };
    }
    if (data.contains("g")) {
        if (e.wiener_copies == 0) throw ConfigError("/noise/wiener", "data.g needs a wiener noise spec");
        d.g = field_list(data["g"], e.grid, static_cast<std::size_t>(e.wiener_copies), "/data/g");
    }
    if (data.contains("h") && e.white_basis == 0) {
        if (!e.levy) throw ConfigError("/noise/levy", "data.h needs a levy noise spec");
        d.d1 = e.levy->d1;
        d.h = field_list(data["h"], e.grid, static_cast<std::size_t>(e.levy->copies * e.levy->d1), "/data/h");
    }
    if (data.contains("maps")) {
        const json& m = data["maps"];
        only_keys(m, "/data/maps", {"f", "g", "h"});
        if (m.contains("f")) d.f_u = make_map(m["f"], "/data/maps/f");
        if (m.contains("g")) d.g_u = make_map(m["g"], "/data/maps/g");
        if (m.contains("h")) d.h_u = make_map(m["h"], "/data/maps/h");
    }
    return d;
}

NoiseRealization build_noise(const Experiment& e, std::uint64_t seed) {
    NoiseRealization n;
    if (e.wiener_copies > 0) n.wiener = sample_wiener_path(e.time, e.wiener_copies, seed);
    if (e.levy && e.white_basis == 0)
        for (int c = 0; c < e.levy->copies; ++c) n.jumps.push_back(sample_jump_path(*e.levy, e.time.tmax, seed, c));
    return n;
}

SolutionField run_experiment(const Experiment& e, std::uint64_t seed) {
    ProblemData d = build_problem(e);
    if (e.white_basis > 0)
        return solve_white_noise(d, e.params, e.grid, e.white_basis, *e.levy, e.time, seed, e.solver);
    const NoiseRealization noise = build_noise(e, seed);
    if (d.has_maps()) return solve_semilinear(d, e.params, e.time, noise, e.solver);
    return solve_linear(d, e.params, e.time, noise);
}

namespace {

bool flag(const json& obj, const std::string& ptr, const std::string& key, bool fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_boolean()) throw ConfigError(child(ptr, key), "expected true or false");
    return it->get<bool>();
}

std::vector<double> numbers(const json& obj, const std::string& ptr, const std::string& key,
                            std::vector<double> fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_array() || it->empty()) throw ConfigError(child(ptr, key), "expected a non-empty array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < it->size(); ++i) {
        if (!(*it)[i].is_number()) throw ConfigError(child(ptr, key) + "/" + std::to_string(i), "expected a number");
        out.push_back((*it)[i].get<double>());
    }
    return out;
}

std::vector<MeshLevel> levels_of(const json& obj, const std::string& ptr, std::vector<MeshLevel> fallback) {
    auto it = obj.find("levels");
    if (it == obj.end()) return fallback;
    const std::string lp = child(ptr, "levels");
    if (!it->is_array() || it->size() < 2) throw ConfigError(lp, "expected at least two [N, steps] pairs");
    std::vector<MeshLevel> out;
    for (std::size_t i = 0; i < it->size(); ++i) {
        const json& l = (*it)[i];
        if (!l.is_array() || l.size() != 2 || !l[0].is_number_integer() || !l[1].is_number_integer())
            throw ConfigError(lp + "/" + std::to_string(i), "expected [N, steps]");
        out.push_back({l[0].get<int>(), l[1].get<int>()});
    }
    return out;
}

KernelKind kind_of(const json& obj, const std::string& ptr, KernelKind fallback) {
    auto it = obj.find("kind");
    if (it == obj.end()) return fallback;
    if (!it->is_string()) throw ConfigError(child(ptr, "kind"), "expected p, q or P");
    try {
        return parse_kernel_kind(it->get<std::string>());
    } catch (const Error& err) {
        throw ConfigError(child(ptr, "kind"), err.what());
    }
}

std::uint64_t first_seed(const json& doc, std::uint64_t fallback) {
    if (!doc.contains("seeds")) return fallback;
    const json& s = doc["seeds"];
    if (!s.is_array() || s.empty() || !s[0].is_number_unsigned())
        throw ConfigError("/seeds", "expected a non-empty array of non-negative integers");
    return s[0].get<std::uint64_t>();
}

double section_number(const json& doc, const char* section, const char* key, double fallback) {
    if (!doc.contains(section)) return fallback;
    return number(doc[section], std::string("/") + section, key, fallback);
}

template <class Config>
void checked(const Config& c) {
    try {
        c.validate();
    } catch (const ParameterError& err) {
        throw ConfigError("/verify", err.what());
    }
}

}  // namespace

const std::vector<std::string>& verification_claims() {
    static const std::vector<std::string> claims{"band-envelope", "besov-conv", "max-reg", "scaling", "gronwall"};
    return claims;
}

json run_verification(const std::string& claim, const json& doc) {
    if (!doc.is_object()) throw ConfigError("", "config must be a JSON object");
    const json empty = json::object();
    const json& v = doc.contains("verify") ? doc["verify"] : empty;
    if (!v.is_object()) throw ConfigError("/verify", "expected an object");
    const std::string vp = "/verify";

    if (claim == "band-envelope") {
        only_keys(v, vp, {"kind", "alpha", "beta", "p", "eps", "delta", "j_min", "j_max", "t_count", "t_min",
                          "t_max", "n", "length", "slack"});
        EnvelopeConfig c;
        c.kind = kind_of(v, vp, c.kind);
        c.alpha = number(v, vp, "alpha", c.alpha);
        c.beta = number(v, vp, "beta", c.beta);
        c.p = number(v, vp, "p", c.p);
        c.eps = number(v, vp, "eps", c.eps);
        c.delta = number(v, vp, "delta", c.delta);
        c.j_min = integer(v, vp, "j_min", c.j_min);
        c.j_max = integer(v, vp, "j_max", c.j_max);
        c.t_count = integer(v, vp, "t_count", c.t_count);
        c.t_min = number(v, vp, "t_min", c.t_min);
        c.t_max = number(v, vp, "t_max", c.t_max);
        c.n = integer(v, vp, "n", c.n);
        c.length = number(v, vp, "length", c.length);
        c.slack = number(v, vp, "slack", c.slack);
        checked(c);
        return to_json(verify_band_envelopes(c));
    }
    if (claim == "besov-conv") {
        only_keys(v, vp, {"kind", "alpha", "beta", "p", "eps", "delta", "horizon", "length", "max_wave",
                          "samples", "levels"});
        BesovConfig c;
        c.kind = kind_of(v, vp, c.kind);
        c.alpha = number(v, vp, "alpha", c.alpha);
        c.beta = number(v, vp, "beta", c.beta);
        c.p = number(v, vp, "p", c.p);
        c.eps = number(v, vp, "eps", c.eps);
        c.delta = number(v, vp, "delta", c.delta);
        c.horizon = number(v, vp, "horizon", section_number(doc, "time", "T", c.horizon));
        c.length = number(v, vp, "length", section_number(doc, "grid", "L", c.length));
        c.max_wave = integer(v, vp, "max_wave", c.max_wave);
        c.samples = integer(v, vp, "samples", c.samples);
        c.seed = first_seed(doc, c.seed);
        c.levels = levels_of(v, vp, c.levels);
        checked(c);
        return to_json(verify_besov_convolution(c));
    }
    if (claim == "max-reg") {
        only_keys(v, vp, {"samples", "levels", "forcing", "wiener", "jumps", "wiener_copies"});
        MaxRegConfig c;
        c.params = parse_params(member(doc, "", "params"));
        c.horizon = section_number(doc, "time", "T", c.horizon);
        c.length = section_number(doc, "grid", "L", c.length);
        if (doc.contains("noise") && doc["noise"].contains("levy"))
            c.levy = parse_levy(doc["noise"]["levy"], "/noise/levy");
        c.samples = integer(v, vp, "samples", c.samples);
        c.levels = levels_of(v, vp, c.levels);
        c.forcing = flag(v, vp, "forcing", c.forcing);
        c.wiener = flag(v, vp, "wiener", c.wiener);
        c.jumps = flag(v, vp, "jumps", c.jumps);
        c.wiener_copies = integer(v, vp, "wiener_copies", c.wiener_copies);
        c.seed = first_seed(doc, c.seed);
        checked(c);
        return to_json(verify_max_regularity(c));
    }
    if (claim == "scaling") {
        only_keys(v, vp, {"scales", "offsets", "n", "steps", "samples", "flat_tol", "steep_min"});
        ScalingConfig c;
        c.params = parse_params(member(doc, "", "params"));
        c.horizon = section_number(doc, "time", "T", c.horizon);
        c.length = section_number(doc, "grid", "L", c.length);
        c.scales = numbers(v, vp, "scales", c.scales);
        c.offsets = numbers(v, vp, "offsets", c.offsets);
        c.n = integer(v, vp, "n", c.n);
        c.steps = integer(v, vp, "steps", c.steps);
        c.samples = integer(v, vp, "samples", c.samples);
        c.flat_tol = number(v, vp, "flat_tol", c.flat_tol);
        c.steep_min = number(v, vp, "steep_min", c.steep_min);
        c.seed = first_seed(doc, c.seed);
        checked(c);
        return to_json(verify_scaling_criticality(c));
    }
    if (claim == "gronwall") {
        only_keys(v, vp, {"n", "steps", "samples", "slack", "initial", "forcing", "wiener", "jumps"});
        GronwallConfig c;
        c.params = parse_params(member(doc, "", "params"));
        c.horizon = section_number(doc, "time", "T", c.horizon);
        c.length = section_number(doc, "grid", "L", c.length);
        if (doc.contains("noise") && doc["noise"].contains("levy"))
            c.levy = parse_levy(doc["noise"]["levy"], "/noise/levy");
        c.n = integer(v, vp, "n", c.n);
        c.steps = integer(v, vp, "steps", c.steps);
        c.samples = integer(v, vp, "samples", c.samples);
        c.slack = number(v, vp, "slack", c.slack);
        c.initial = flag(v, vp, "initial", c.initial);
        c.forcing = flag(v, vp, "forcing", c.forcing);
        c.wiener = flag(v, vp, "wiener", c.wiener);
        c.jumps = flag(v, vp, "jumps", c.jumps);
        c.seed = first_seed(doc, c.seed);
        checked(c);
        return to_json(verify_gronwall(c));
    }
    throw ConfigError("/claim", "unknown claim '" + claim + "'");
}

json to_json(const Manifest& m) {
    return {{"config_digest", m.digest}, {"seeds", m.seeds},
            {"derived", m.derived},      {"extra", m.extra},
            {"tool_version", "0.3.0"},   {"wall_seconds", m.wall_seconds},
            {"outputs", m.outputs}};
}

}  // namespace fspde::io
