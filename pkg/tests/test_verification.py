from teleswitch import verification


def test_suite_passes_and_names_at_least_twelve_checks():
    results = verification.run_all(42)
    assert len(results) >= 12
    names = [r.name for r in results]
    assert len(set(names)) == len(names)
    failed = [r for r in results if not r.passed]
    assert not failed, f"failed checks: {[(r.name, r.detail) for r in failed]}"


def test_suite_is_deterministic_for_a_seed():
    a = verification.run_all(7)
    b = verification.run_all(7)
    assert a == b


def test_report_lines_carry_status_prefix():
    lines = verification.report_lines(verification.run_all(42))
    assert all(line.startswith(("[PASS]", "[FAIL]")) for line in lines)
    assert len(lines) >= 12
