#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "padiclz/characters.hpp"

namespace padiclz::cli {

// Anything wrong with the input: unreadable file, malformed TOML, unknown keys,
// or a setup rejected by a module precondition. Maps to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SetupSpec {
    long disc = 0;
    long p = 0;
    std::string chi;
    std::string label() const;
};

struct JobConfig {
    std::string name;
    std::string kind;
    long p = 0;
    int precision = 20;
    int truncation = 20;
    int depth = 4;

    // interp-check
    std::vector<std::string> characters;
    long conductor_max = 0;
    int n_max = 6;
    long j = 1;

    // coleman-check
    int levels = 3;
    std::vector<long> units;

    // linv, exceptional-zero
    long disc = 0;
    std::string chi;
    std::optional<long> aux_disc;
    std::optional<long> class_number;
    std::string class_number_provenance;
    std::optional<std::pair<mpq_class, mpq_class>> generator;

    // leading-term
    std::vector<SetupSpec> setups;

    // lattice-suite
    int instances = 200;
    int free_instances = 100;
    int max_ring = 8;
    int max_rank = 3;
    std::uint64_t seed = 1;

    nlohmann::json echo() const;
};

struct RunConfig {
    bool lower_bound_is_pass = false;
    std::vector<JobConfig> jobs;
};

// Accepts "kronecker(D)" and "chi{modulus=f, index=i}". Throws padiclz::Error
// "invalid-character-spec"; parse_config reports it as a ConfigError.
DirichletCharacter parse_character(const std::string& spec);
HeckeSetup make_setup(long disc, long p, const std::string& chi);

// Parses and validates; every job is checked against the preconditions of the
// modules it will call. precision_override replaces each job's precision.
RunConfig load_config(const std::string& path, std::optional<int> precision_override = std::nullopt);
RunConfig parse_config(const std::string& text, std::optional<int> precision_override = std::nullopt);

}  // namespace padiclz::cli
