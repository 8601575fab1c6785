#pragma once

#include "dpprice/core/error.hpp"
#include "dpprice/core/follower.hpp"
#include "dpprice/core/instance.hpp"
#include "dpprice/core/item_set.hpp"
#include "dpprice/core/oracle.hpp"
#include "dpprice/core/result.hpp"
#include "dpprice/core/rng.hpp"
#include "dpprice/diagrams/decision.hpp"
#include "dpprice/diagrams/diagram.hpp"
#include "dpprice/diagrams/dot.hpp"
#include "dpprice/diagrams/selection.hpp"
#include "dpprice/driver/driver.hpp"
#include "dpprice/milp/backend.hpp"
#include "dpprice/milp/branch_and_bound.hpp"
#include "dpprice/milp/model.hpp"
#include "dpprice/milp/simplex.hpp"
#include "dpprice/problems/difficulty.hpp"
#include "dpprice/problems/follower_factory.hpp"
#include "dpprice/problems/generators.hpp"
#include "dpprice/reformulate/reformulate.hpp"
