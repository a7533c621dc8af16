#pragma once

#include <gtest/gtest.h>

#include <string>

#include "padiclz/error.hpp"

// Asserts that `stmt` throws padiclz::Error with the given code.
#define EXPECT_ERROR_CODE(stmt, expected)                                        \
    do {                                                                         \
        std::string got_code_;                                                   \
        try {                                                                    \
            (void)(stmt);                                                        \
        } catch (const padiclz::Error& e_) {                                     \
            got_code_ = e_.code();                                               \
        }                                                                        \
        EXPECT_EQ(got_code_, std::string(expected)) << "statement: " #stmt;      \
    } while (0)
