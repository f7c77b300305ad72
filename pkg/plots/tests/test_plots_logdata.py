import numpy as np
import pytest

from snsik_plots import EmptyLogError, LogFormatError, parse_log

GOOD_HEADER = "t,q_1,q_2,qd_1,qd_2,ee_x,ee_y,err_x,err_y,s_star,status,sat_tags"
GOOD_ROW = "0,0.1,0.2,0.01,0.02,1,0,0,0,1,exact,"


def test_parses_the_planar_golden_log(planar_log):
    log = planar_log
    assert log.ticks == 10000
    assert log.joint_count == 6
    assert log.axes == ("x", "y")
    assert log.cp_groups == tuple((i, ("y",)) for i in range(1, 6))
    assert log.t[0] == 0.0 and np.isclose(log.t[1], 0.001)
    assert set(log.status) <= {"exact", "scaled", "task_saturated", "blocked"}
    assert np.all((log.s_star >= 0.0) & (log.s_star <= 1.0))
    assert log.q.shape == (10000, 6) and log.qd.shape == (10000, 6)
    assert log.cp_pos["cp1_y"].shape == (10000,)


def test_parses_the_spatial_golden_log(spatial_log):
    log = spatial_log
    assert log.joint_count == 7
    assert log.axes == ("x", "y", "z")
    assert log.cp_groups == ((1, ("x", "y")), (2, ("y",)))
    assert "cp2_y" in log.cp_pos and "cp2_y" in log.cp_vel


def test_small_synthetic_log_round_trips():
    log = parse_log(GOOD_HEADER + "\n" + GOOD_ROW + "\n")
    assert log.ticks == 1
    assert log.joint_count == 2
    assert log.cp_groups == ()
    assert log.status == ("exact",)


def test_header_only_log_is_an_empty_data_error():
    with pytest.raises(EmptyLogError):
        parse_log(GOOD_HEADER + "\n")


def test_blank_file_is_a_format_error():
    with pytest.raises(LogFormatError):
        parse_log("")


def test_wrong_first_column_is_a_format_error():
    with pytest.raises(LogFormatError, match="incompatible"):
        parse_log(GOOD_HEADER.replace("t,", "time,") + "\n" + GOOD_ROW)


def test_mismatched_velocity_block_is_a_format_error():
    with pytest.raises(LogFormatError, match="qd_"):
        parse_log(GOOD_HEADER.replace(",qd_2", "") + "\n" + GOOD_ROW)


def test_unknown_trailing_column_is_a_format_error():
    with pytest.raises(LogFormatError, match="trailing"):
        parse_log(GOOD_HEADER + ",mood\n" + GOOD_ROW + ",happy\n")


def test_missing_status_block_is_a_format_error():
    broken = GOOD_HEADER.replace("s_star,status,sat_tags", "s_star,sat_tags,status")
    with pytest.raises(LogFormatError, match="s_star"):
        parse_log(broken + "\n" + GOOD_ROW)


def test_row_width_mismatch_is_a_format_error():
    with pytest.raises(LogFormatError, match="width"):
        parse_log(GOOD_HEADER + "\n0,1,2\n")


def test_non_numeric_value_is_a_format_error():
    with pytest.raises(LogFormatError, match="non-numeric"):
        parse_log(GOOD_HEADER + "\n" + GOOD_ROW.replace("0.01", "fast") + "\n")


def test_control_point_columns_must_be_ordered():
    header = GOOD_HEADER + ",cp_2_y,cpd_2_y"
    with pytest.raises(LogFormatError, match="numbered"):
        parse_log(header + "\n" + GOOD_ROW + ",0,0\n")
