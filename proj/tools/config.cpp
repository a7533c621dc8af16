#include "config.hpp"

#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "padiclz/error.hpp"
#include "padiclz/numtheory.hpp"
#include "padiclz/units.hpp"

namespace padiclz::cli {

namespace {

const std::set<std::string> kCommonKeys{"name", "kind", "p", "precision", "truncation", "depth"};

const std::map<std::string, std::set<std::string>> kKindKeys{
    {"interp-check", {"characters", "conductor_max", "n_max", "j"}},
    {"coleman-check", {"levels", "units"}},
    {"linv", {"disc", "chi", "aux_disc", "class_number", "class_number_provenance", "generator"}},
    {"exceptional-zero", {"disc", "chi"}},
    {"leading-term", {"setups"}},
    {"lattice-suite", {"instances", "free_instances", "max_ring", "max_rank", "seed"}},
};

[[noreturn]] void fail(const std::string& where, const std::string& msg) { throw ConfigError(where + ": " + msg); }

long get_int(const toml::table& t, const std::string& key, const std::string& where, std::optional<long> def = {}) {
    const toml::node* n = t.get(key);
    if (!n) {
        if (def) return *def;
        fail(where, "missing required key '" + key + "'");
    }
    if (auto v = n->value_exact<int64_t>()) return static_cast<long>(*v);
    fail(where, "key '" + key + "' must be an integer");
}

std::string get_string(const toml::table& t, const std::string& key, const std::string& where,
                       std::optional<std::string> def = {}) {
    const toml::node* n = t.get(key);
    if (!n) {
        if (def) return *def;
        fail(where, "missing required key '" + key + "'");
    }
    if (auto v = n->value_exact<std::string>()) return *v;
    fail(where, "key '" + key + "' must be a string");
}

const toml::array& get_array(const toml::table& t, const std::string& key, const std::string& where) {
    const toml::node* n = t.get(key);
    if (!n || !n->is_array()) fail(where, "key '" + key + "' must be an array");
    return *n->as_array();
}

void check_keys(const toml::table& t, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [k, v] : t) {
        (void)v;
        if (!allowed.count(std::string(k.str()))) fail(where, "unknown key '" + std::string(k.str()) + "'");
    }
}

mpq_class parse_rational(const toml::node& n, const std::string& where) {
    if (auto v = n.value_exact<int64_t>()) return mpq_class(static_cast<long>(*v));
    if (auto s = n.value_exact<std::string>()) {
        mpq_class q;
        if (q.set_str(*s, 10) != 0) fail(where, "cannot parse rational '" + *s + "'");
        q.canonicalize();
        return q;
    }
    fail(where, "generator entries must be integers or rational strings");
}

void require(bool ok, const std::string& where, const std::string& msg) {
    if (!ok) fail(where, msg);
}

void validate_prime(long p, const std::string& where) {
    require(p > 3 && nt::is_prime(p), where, "p must be a prime > 3, got " + std::to_string(p));
}

HeckeSetup checked_setup(long disc, long p, const std::string& chi, const std::string& where) {
    try {
        return make_setup(disc, p, chi);
    } catch (const Error& e) {
        fail(where, std::string("invalid setup (") + e.what() + ")");
    }
}

void validate_interp(const JobConfig& j, const std::string& where) {
    validate_prime(j.p, where);
    require(!j.characters.empty() || j.conductor_max > 0, where, "give 'characters' or 'conductor_max'");
    require(j.conductor_max <= 200, where, "conductor_max above 200 is not supported");
    require(j.n_max >= 1 && j.n_max <= 12, where, "n_max must lie in [1, 12]");
    require(j.j >= 0 && j.j < j.p - 1, where, "j must lie in [0, p-1)");
    for (const auto& spec : j.characters) {
        DirichletCharacter c;
        try {
            c = parse_character(spec);
        } catch (const Error& e) {
            fail(where, e.what());
        }
        require(c.is_primitive(), where, spec + " is not primitive");
        require(c.is_odd(), where, spec + " is not odd");
        require(c.conductor() > 1 && c.conductor() % j.p != 0, where, spec + ": conductor must be > 1 and prime to p");
        require(c.order() % j.p != 0, where, spec + ": order divisible by p has no unramified realization");
    }
}

void validate_linv(const JobConfig& j, const std::string& where) {
    const HeckeSetup s = checked_setup(j.disc, j.p, j.chi, where);
    require(s.chi_q.order() == 2, where, "only quadratic characters are supported");
    const long D = odd_discriminant(s);
    if (j.aux_disc) require(*j.aux_disc == D, where, "aux_disc " + std::to_string(*j.aux_disc) + " does not match the odd field Q(sqrt(" + std::to_string(D) + "))");
    require(nt::kronecker(D, j.p) == 1, where, "p does not split in Q(sqrt(" + std::to_string(D) + "))");
    if (j.class_number) {
        require(!j.class_number_provenance.empty(), where, "class_number needs a 'class_number_provenance' string");
        const long h = class_number(D);
        require(*j.class_number == h, where, "class_number " + std::to_string(*j.class_number) + " disagrees with the computed h(" + std::to_string(D) + ") = " + std::to_string(h));
    } else {
        require(j.class_number_provenance.empty(), where, "class_number_provenance given without class_number");
    }
}

JobConfig parse_job(const toml::table& t, std::size_t index, int def_prec, int def_trunc) {
    JobConfig j;
    std::string where = "job " + std::to_string(index + 1);
    j.kind = get_string(t, "kind", where);
    const auto kk = kKindKeys.find(j.kind);
    if (kk == kKindKeys.end()) fail(where, "unknown kind '" + j.kind + "'");
    j.name = get_string(t, "name", where, j.kind + "-" + std::to_string(index + 1));
    where = "job '" + j.name + "'";
    std::set<std::string> allowed = kCommonKeys;
    allowed.insert(kk->second.begin(), kk->second.end());
    check_keys(t, allowed, where);

    j.precision = static_cast<int>(get_int(t, "precision", where, def_prec));
    j.truncation = static_cast<int>(get_int(t, "truncation", where, def_trunc));
    j.depth = static_cast<int>(get_int(t, "depth", where, 4));
    require(j.precision >= 8 && j.precision <= 200, where, "precision must lie in [8, 200]");
    require(j.truncation >= 2 && j.truncation <= 60, where, "truncation must lie in [2, 60]");
    require(j.depth >= 2 && j.depth <= 6, where, "depth must lie in [2, 6]");

    if (j.kind == "interp-check") {
        j.p = get_int(t, "p", where);
        if (t.get("characters"))
            for (const auto& n : get_array(t, "characters", where)) {
                auto s = n.value_exact<std::string>();
                require(s.has_value(), where, "characters must be strings");
                j.characters.push_back(*s);
            }
        j.conductor_max = get_int(t, "conductor_max", where, 0);
        j.n_max = static_cast<int>(get_int(t, "n_max", where, 6));
        j.j = get_int(t, "j", where, 1);
        validate_interp(j, where);
    } else if (j.kind == "coleman-check") {
        j.p = get_int(t, "p", where);
        validate_prime(j.p, where);
        j.levels = static_cast<int>(get_int(t, "levels", where, 3));
        require(j.levels >= 1 && j.levels <= 3, where, "levels must lie in [1, 3]");
        if (t.get("units"))
            for (const auto& n : get_array(t, "units", where)) {
                auto v = n.value_exact<int64_t>();
                require(v && *v > 0 && *v % j.p != 0, where, "units must be positive integers prime to p");
                j.units.push_back(static_cast<long>(*v));
            }
    } else if (j.kind == "linv" || j.kind == "exceptional-zero") {
        j.disc = get_int(t, "disc", where);
        j.p = get_int(t, "p", where);
        j.chi = get_string(t, "chi", where);
        if (j.kind == "linv") {
            if (t.get("aux_disc")) j.aux_disc = get_int(t, "aux_disc", where);
            if (t.get("class_number")) j.class_number = get_int(t, "class_number", where);
            j.class_number_provenance = get_string(t, "class_number_provenance", where, std::string());
            if (t.get("generator")) {
                const auto& g = get_array(t, "generator", where);
                require(g.size() == 2, where, "generator must be [a, b] for pi = a + b sqrt(D)");
                j.generator = std::make_pair(parse_rational(*g.get(0), where), parse_rational(*g.get(1), where));
            }
            validate_linv(j, where);
        } else {
            checked_setup(j.disc, j.p, j.chi, where);
        }
    } else if (j.kind == "leading-term") {
        for (const auto& n : get_array(t, "setups", where)) {
            require(n.is_table(), where, "setups must be tables {disc, p, chi}");
            const auto& st = *n.as_table();
            const std::string sw = where + " setup " + std::to_string(j.setups.size() + 1);
            check_keys(st, {"disc", "p", "chi"}, sw);
            SetupSpec s{get_int(st, "disc", sw), get_int(st, "p", sw), get_string(st, "chi", sw)};
            const HeckeSetup h = checked_setup(s.disc, s.p, s.chi, sw);
            require(h.chi_q.order() == 2, sw, "only quadratic characters are supported");
            require(exceptional_count(h) == 1, sw, "leading-term comparison needs e = 1");
            require(nt::kronecker(odd_discriminant(h), s.p) == 1, sw, "p does not split in the odd quadratic field");
            j.setups.push_back(s);
        }
        require(j.setups.size() >= 2, where, "need at least two setups to compare");
    } else if (j.kind == "lattice-suite") {
        j.instances = static_cast<int>(get_int(t, "instances", where, 200));
        j.free_instances = static_cast<int>(get_int(t, "free_instances", where, 100));
        j.max_ring = static_cast<int>(get_int(t, "max_ring", where, 8));
        j.max_rank = static_cast<int>(get_int(t, "max_rank", where, 3));
        const long seed = get_int(t, "seed", where, 1);
        require(seed >= 0, where, "seed must be non-negative");
        j.seed = static_cast<std::uint64_t>(seed);
        require(j.instances >= 0 && j.free_instances >= 0, where, "instance counts must be non-negative");
        require(j.max_ring >= 2 && j.max_ring <= 16, where, "max_ring must lie in [2, 16]");
        require(j.max_rank >= 1 && j.max_rank <= 3, where, "max_rank must lie in [1, 3]");
    }
    return j;
}

RunConfig from_table(const toml::table& root, std::optional<int> precision_override) {
    check_keys(root, {"precision", "truncation", "lower_bound_is_pass", "job"}, "config");
    RunConfig rc;
    const int prec = static_cast<int>(get_int(root, "precision", "config", 20));
    const int trunc = static_cast<int>(get_int(root, "truncation", "config", 20));
    if (const toml::node* n = root.get("lower_bound_is_pass")) {
        auto b = n->value_exact<bool>();
        require(b.has_value(), "config", "lower_bound_is_pass must be a boolean");
        rc.lower_bound_is_pass = *b;
    }
    const toml::node* jobs = root.get("job");
    require(jobs && jobs->is_array_of_tables(), "config", "expected at least one [[job]] table");
    std::set<std::string> names;
    std::size_t i = 0;
    for (const auto& n : *jobs->as_array()) {
        JobConfig j = parse_job(*n.as_table(), i++, precision_override.value_or(prec), trunc);
        if (precision_override) j.precision = *precision_override;
        require(names.insert(j.name).second, "config", "duplicate job name '" + j.name + "'");
        rc.jobs.push_back(std::move(j));
    }
    require(!rc.jobs.empty(), "config", "expected at least one [[job]] table");
    return rc;
}

}  // namespace

std::string SetupSpec::label() const { return "D=" + std::to_string(disc) + ",p=" + std::to_string(p) + "," + chi; }

DirichletCharacter parse_character(const std::string& spec) {
    static const std::regex kron(R"(\s*kronecker\s*\(\s*(-?\d+)\s*\)\s*)");
    std::smatch m;
    if (std::regex_match(spec, m, kron)) {
        const long D = std::stol(m[1]);
        const long f = D < 0 ? -D : D;
        if (f < 3) throw Error("invalid-character-spec", spec + ": not a fundamental discriminant");
        const DirichletCharacter c = DirichletCharacter::kronecker(D);
        if (!c.is_primitive() || nt::mod(D, 4) == 2 || nt::mod(D, 4) == 3)
            throw Error("invalid-character-spec", spec + ": not a fundamental discriminant");
        return c;
    }
    return DirichletCharacter::parse(spec);
}

HeckeSetup make_setup(long disc, long p, const std::string& chi) {
    return HeckeSetup::make(disc, p, parse_character(chi));
}

nlohmann::json JobConfig::echo() const {
    nlohmann::json e{{"name", name}, {"kind", kind}, {"precision", precision}};
    if (kind == "interp-check") {
        e["p"] = p;
        e["depth"] = depth;
        e["truncation"] = truncation;
        e["characters"] = characters;
        e["conductor_max"] = conductor_max;
        e["n_max"] = n_max;
        e["j"] = j;
    } else if (kind == "coleman-check") {
        e["p"] = p;
        e["levels"] = levels;
        e["units"] = units;
    } else if (kind == "linv" || kind == "exceptional-zero") {
        e["p"] = p;
        e["disc"] = disc;
        e["chi"] = chi;
        if (kind == "exceptional-zero") {
            e["depth"] = depth;
            e["truncation"] = truncation;
        }
        if (aux_disc) e["aux_disc"] = *aux_disc;
        if (class_number) {
            e["class_number"] = *class_number;
            e["class_number_provenance"] = class_number_provenance;
        }
        if (generator) e["generator"] = {generator->first.get_str(), generator->second.get_str()};
    } else if (kind == "leading-term") {
        e["depth"] = depth;
        e["truncation"] = truncation;
        nlohmann::json s = nlohmann::json::array();
        for (const auto& x : setups) s.push_back({{"disc", x.disc}, {"p", x.p}, {"chi", x.chi}});
        e["setups"] = s;
    } else if (kind == "lattice-suite") {
        e.erase("precision");
        e["instances"] = instances;
        e["free_instances"] = free_instances;
        e["max_ring"] = max_ring;
        e["max_rank"] = max_rank;
        e["seed"] = seed;
    }
    return e;
}

RunConfig parse_config(const std::string& text, std::optional<int> precision_override) {
    toml::table root;
    try {
        root = toml::parse(text);
    } catch (const toml::parse_error& e) {
        std::ostringstream os;
        os << "malformed TOML at line " << e.source().begin.line << ", column " << e.source().begin.column << ": "
           << e.description();
        throw ConfigError(os.str());
    }
    return from_table(root, precision_override);
}

RunConfig load_config(const std::string& path, std::optional<int> precision_override) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), precision_override);
}

}  // namespace padiclz::cli
