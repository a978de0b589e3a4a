# makes the tests directory importable from any invocation cwd
