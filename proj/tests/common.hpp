#pragma once

#include <doctest.h>

#include "sss/errors.hpp"

// Asserts that the expression throws sss::Error with the given code.
#define CHECK_RAISES(errc_, ...)                                               \
    do {                                                                       \
        try {                                                                  \
            __VA_ARGS__;                                                       \
            FAIL_CHECK("expected " << sss::Errc::errc_ << ", nothing thrown"); \
        } catch (const sss::Error& e_) {                                       \
            CHECK(e_.code() == sss::Errc::errc_);                              \
        }                                                                      \
    } while (0)
