def pytest_terminal_summary(terminalreporter):
    lines = []
    for key in ("passed", "failed"):
        for rep in terminalreporter.stats.get(key, []):
            if rep.when != "call":
                continue
            lines.extend(v for name, v in rep.user_properties if name == "acceptance")
    if lines:
        terminalreporter.section("acceptance criteria")
        # criterion order, not completion order
        for line in sorted(lines, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
