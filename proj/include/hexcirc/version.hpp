#pragma once

/// @file version.hpp
/// @brief Library version string recorded in experiment manifests.

#define HEXCIRC_VERSION "1.0.0"
