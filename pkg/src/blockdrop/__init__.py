"""blockdrop: deterministic 2D physics puzzles solved by eliminating gray blocks.

Forty games in four splits (basic, noisy, compositional, multi_ball) share one
objective: make every red ball fall into the hole. Agents intervene only by
removing gray blocks, one intervention per 0.1 s control step, inside a 15 s
episode.
"""

__version__ = "0.1.0"
