#pragma once

#include "vkoga/dataset.hpp"
#include "vkoga/errors.hpp"
#include "vkoga/geometry.hpp"
#include "vkoga/greedy.hpp"
#include "vkoga/kernels.hpp"
#include "vkoga/model.hpp"
#include "vkoga/serialize.hpp"
#include "vkoga/validation.hpp"
