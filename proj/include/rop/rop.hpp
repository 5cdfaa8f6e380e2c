#pragma once

#include "rop/core.hpp"
#include "rop/tensor_core.hpp"
#include "rop/partition.hpp"
#include "rop/subspaces.hpp"
#include "rop/preserver_forms.hpp"
#include "rop/bipartite.hpp"
#include "rop/preserver_verify.hpp"
#include "rop/preserver_recover.hpp"
#include "rop/io.hpp"
