#pragma once

// Umbrella header: set-valued Young integration toolkit.

#include "setyoung/common.hpp"
#include "setyoung/convex_body.hpp"
#include "setyoung/steiner.hpp"
#include "setyoung/sampled_path.hpp"
#include "setyoung/fbm.hpp"
#include "setyoung/young.hpp"
#include "setyoung/set_valued_path.hpp"
#include "setyoung/selection.hpp"
#include "setyoung/aumann.hpp"
#include "setyoung/inclusions.hpp"
#include "setyoung/serialization.hpp"
