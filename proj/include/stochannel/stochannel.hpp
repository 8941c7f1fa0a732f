#pragma once

#include "stochannel/capacity.hpp"
#include "stochannel/channel.hpp"
#include "stochannel/dist.hpp"
#include "stochannel/error.hpp"
#include "stochannel/monoid.hpp"
#include "stochannel/polytope.hpp"
