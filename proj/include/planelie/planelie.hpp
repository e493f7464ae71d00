#pragma once

#include "planelie/autmap.hpp"
#include "planelie/error.hpp"
#include "planelie/liestruct.hpp"
#include "planelie/linalg.hpp"
#include "planelie/poisson.hpp"
#include "planelie/poly.hpp"
#include "planelie/scalar.hpp"
#include "planelie/vector_field.hpp"
#include "planelie/vfield.hpp"
