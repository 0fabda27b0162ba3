#pragma once

#include <lcsharp/constants.hpp>
#include <lcsharp/crossings.hpp>
#include <lcsharp/errors.hpp>
#include <lcsharp/expfamily.hpp>
#include <lcsharp/log_concave.hpp>
#include <lcsharp/mc_oracle.hpp>
#include <lcsharp/quadrature.hpp>
#include <lcsharp/roots.hpp>
#include <lcsharp/simplex.hpp>
#include <lcsharp/specfun.hpp>
