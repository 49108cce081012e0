"""Concrete red/blue pebble games on small CDAGs."""
from .cdag import CDAG, CDAGError, parse_cdag, random_dag
from .game import (NR, STD, Calculation, CalculationError, CapExceeded, Infeasible, MinIOResult,
                   Move, greedy_calculation, min_io, parse_moves, validate_calculation)
from .partition import (HK, Partition, Verdict, hmin_bruteforce, min_dominator,
                        min_dominator_bruteforce, partition_from_calculation, verify_partition)
from .transform import FLEXIBLE, STANDARD, TagSet, decompose, tag
