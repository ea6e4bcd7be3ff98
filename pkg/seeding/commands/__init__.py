from . import analyze, optimize, simulate, sweep

command_list = [
    analyze.command,
    optimize.command,
    simulate.command,
    sweep.command,
]
