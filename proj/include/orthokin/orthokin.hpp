#pragma once

#include "orthokin/device.hpp"
#include "orthokin/errors.hpp"
#include "orthokin/grid_io.hpp"
#include "orthokin/model.hpp"
#include "orthokin/model_json.hpp"
#include "orthokin/optimize.hpp"
#include "orthokin/orthoglide.hpp"
#include "orthokin/transmission.hpp"
#include "orthokin/workspace.hpp"
#include "orthokin/wrist.hpp"
