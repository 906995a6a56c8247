#pragma once

#include "fanproj/numeric.hpp"
#include "fanproj/ratlp.hpp"
#include "fanproj/fan.hpp"
#include "fanproj/wall_normals.hpp"
#include "fanproj/sign_adapt.hpp"
#include "fanproj/certificates.hpp"
#include "fanproj/io.hpp"
