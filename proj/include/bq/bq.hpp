#pragma once

#include "bq/error.hpp"
#include "bq/scalar.hpp"
#include "bq/quiver.hpp"
#include "bq/ideal.hpp"
#include "bq/integer_matrix.hpp"
#include "bq/group.hpp"
#include "bq/homotopy.hpp"
#include "bq/transform.hpp"
#include "bq/gamma.hpp"
#include "bq/finite_group.hpp"
#include "bq/cover.hpp"
#include "bq/dsl.hpp"
#include "bq/io.hpp"
