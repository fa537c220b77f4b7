#pragma once

#include "huakit/error.hpp"
#include "huakit/matrix.hpp"
#include "huakit/function.hpp"
#include "huakit/spectral.hpp"
#include "huakit/random.hpp"
#include "huakit/module.hpp"
#include "huakit/report.hpp"
#include "huakit/inequalities.hpp"
#include "huakit/instances.hpp"
#include "huakit/opconvex.hpp"
#include "huakit/campaign.hpp"
#include "huakit/serialize.hpp"
