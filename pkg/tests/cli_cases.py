"""One cheap, valid invocation per CLI subcommand."""

CMDS = {
    "sieve": ["--max-norm", "100"],
    "count": ["--r-max", "30", "--c", "sqrt2i", "--delta", "0.2"],
    "equid": ["--c", "sqrt2i", "--delta", "0.2", "--x2", "2000"],
    "spacing": ["--c", "sqrt2i", "--max-q", "20"],
    "coro-search": ["--c", "sqrt2i", "--max-norm", "2000"],
    "vaaler": ["--J", "4", "--grid", "11"],
    "linear": ["--kappa", "0.3+0.7i", "--y-lo", "1", "--y-hi", "200"],
    "gc": ["--c", "sqrt2i", "--y", "50", "--z", "30", "--q", "5"],
    "e3": ["--c", "sqrt2i", "--x1", "1", "--x2", "1000", "--M", "20"],
    "f3": ["--c", "sqrt2i", "--x1", "1", "--x2", "1000", "--M", "20", "--delta", "0.3", "--a-seq", "random"],
    "report": ["--c", "sqrt2i", "--q=-2i", "--delta", "0.3"],
    "fn-count": ["--c", "0.31+0.17i", "--alpha", "1.37+0.22i", "--N", "30", "--A", "1", "--B", "2"],
    "theo1-mc": ["--c", "0.31+0.17i", "--N", "20", "--A", "1", "--B", "2", "--r-min", "1", "--r-max", "1.5", "--samples", "5"],
    "sieve-error": ["--c", "sqrt2i", "--alpha", "0.3+0.4i", "--P", "40", "--mu", "0.3", "--two-prime"],
}
