#pragma once

// Everything in one include.

#include "psdp/diagnostics.hpp"
#include "psdp/error.hpp"
#include "psdp/instance.hpp"
#include "psdp/json_io.hpp"
#include "psdp/lp.hpp"
#include "psdp/pipeline.hpp"
#include "psdp/solver.hpp"
#include "psdp/spectra.hpp"
#include "psdp/transform.hpp"
#include "psdp/verify.hpp"
