//! Hosts the `acceptance` test target; run it with
//! `cargo test -p boson-witness-validation --test acceptance`.
