#pragma once

// Umbrella header.

#include "nullsql/ast.hpp"
#include "nullsql/database.hpp"
#include "nullsql/dbfile.hpp"
#include "nullsql/eval.hpp"
#include "nullsql/harness.hpp"
#include "nullsql/logic.hpp"
#include "nullsql/oracle.hpp"
#include "nullsql/parser.hpp"
#include "nullsql/relation.hpp"
#include "nullsql/translate.hpp"
#include "nullsql/value.hpp"
#include "nullsql/wf.hpp"
