use std::ffi::{c_char, CString};
use std::ptr;

use oricolor_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0u8; 256];
    let n = unsafe { oc_last_error(buf.as_mut_ptr().cast::<c_char>(), buf.len()) };
    buf.truncate(n.min(255));
    String::from_utf8(buf).unwrap()
}

#[test]
fn graph_handles() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(oc_graph_new(3, &mut g), OcStatus::Ok);
        assert_eq!(oc_graph_add_arc(g, 0, 1), OcStatus::Ok);
        assert_eq!(oc_graph_add_arc(g, 1, 0), OcStatus::InvalidArgument);
        assert!(!last_error().is_empty());
        assert_eq!(oc_graph_add_arc(g, 0, 7), OcStatus::InvalidArgument);
        assert_eq!((oc_graph_order(g), oc_graph_arc_count(g), oc_graph_max_degree(g)), (3, 1, 1));
        oc_graph_free(g);

        let text = CString::new("digraph 2 1\n0 1\n1 0\n").unwrap();
        let mut h = ptr::null_mut();
        assert_eq!(oc_graph_parse(text.as_ptr(), &mut h), OcStatus::Parse);
        assert!(h.is_null());
        assert!(last_error().contains("line 3"), "{}", last_error());

        assert_eq!(oc_graph_new(1, ptr::null_mut()), OcStatus::NullArgument);
        assert_eq!(oc_graph_order(ptr::null()), 0);
        oc_graph_free(ptr::null_mut());
    }
}

#[test]
fn properties_through_handles() {
    unsafe {
        let mut t = ptr::null_mut();
        assert_eq!(oc_target_paley(7, &mut t), OcStatus::Ok);
        assert_eq!(oc_target_order(t), 7);
        let mut min = 0;
        assert_eq!(oc_check_pnk(t, 1, 3, false, &mut min), OcStatus::Ok);
        assert_eq!(min, 3);
        assert_eq!(oc_check_pnk(t, 2, 2, true, &mut min), OcStatus::Fails);
        assert_eq!(min, 1);
        oc_target_free(t);

        assert_eq!(oc_target_paley(9, &mut t), OcStatus::Unsupported);
        let mut tr = ptr::null_mut();
        assert_eq!(oc_target_tromp(11, false, &mut tr), OcStatus::Ok);
        assert_eq!(oc_check_cnk(tr, 2, 17, &mut min), OcStatus::Ok);
        assert!(min >= 17);
        oc_target_free(tr);
    }
}

#[test]
fn color_verify_solve() {
    unsafe {
        let model = CString::new("d-regular").unwrap();
        let mut g = ptr::null_mut();
        assert_eq!(oc_graph_generate(model.as_ptr(), 30, 4, 2, &mut g), OcStatus::Ok);
        let mut c = ptr::null_mut();
        assert_eq!(oc_color(g, 0, false, &mut c), OcStatus::Ok);
        assert_eq!(oc_coloring_part_count(c), 1);
        assert_eq!(oc_coloring_part_bound(c, 0), 26);
        let mut name = [0 as c_char; 32];
        let len = oc_coloring_part_target(c, 0, name.as_mut_ptr(), name.len());
        assert_eq!(std::ffi::CStr::from_ptr(name.as_ptr()).to_str().unwrap().len(), len);

        let n = oc_graph_order(g);
        let mut colors = vec![0usize; n];
        for (v, col) in colors.iter_mut().enumerate() {
            let mut part = 9;
            assert_eq!(oc_coloring_get(c, v, col, &mut part), OcStatus::Ok);
            assert_eq!(part, 0);
        }
        assert_eq!(oc_coloring_get(c, n, ptr::null_mut(), ptr::null_mut()), OcStatus::InvalidArgument);

        let mut t = ptr::null_mut();
        assert_eq!(oc_target_tromp(11, true, &mut t), OcStatus::Ok);
        assert_eq!(oc_verify(g, t, colors.as_ptr(), n), OcStatus::Ok);
        colors[1] = colors[0];
        colors.iter_mut().for_each(|x| *x = 0);
        assert_eq!(oc_verify(g, t, colors.as_ptr(), n), OcStatus::Fails);
        assert_eq!(oc_verify(g, t, colors.as_ptr(), n - 1), OcStatus::InvalidArgument);

        assert_eq!(oc_solve(g, t, 0, colors.as_mut_ptr(), n), OcStatus::Ok);
        assert_eq!(oc_verify(g, t, colors.as_ptr(), n), OcStatus::Ok);

        // a directed 5-cycle has no QR_3-coloring
        let mut c5 = ptr::null_mut();
        oc_graph_new(5, &mut c5);
        for i in 0..5 {
            oc_graph_add_arc(c5, i, (i + 1) % 5);
        }
        let mut qr3 = ptr::null_mut();
        oc_target_paley(3, &mut qr3);
        let mut out = [0usize; 5];
        assert_eq!(oc_solve(c5, qr3, 0, out.as_mut_ptr(), 5), OcStatus::Unsat);

        oc_coloring_free(c);
        for h in [g, c5] {
            oc_graph_free(h);
        }
        oc_target_free(t);
        oc_target_free(qr3);
    }
}

#[test]
fn degree_above_seven_is_unsupported() {
    unsafe {
        let model = CString::new("d-regular").unwrap();
        let mut g = ptr::null_mut();
        assert_eq!(oc_graph_generate(model.as_ptr(), 20, 8, 1, &mut g), OcStatus::Ok);
        let mut c = ptr::null_mut();
        assert_eq!(oc_color(g, 0, false, &mut c), OcStatus::Unsupported);
        assert!(c.is_null());
        oc_graph_free(g);
    }
}
