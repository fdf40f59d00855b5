// Runs each example's `main` so the examples keep compiling and working.

macro_rules! example {
    ($name:ident) => {
        mod $name {
            include!(concat!("../examples/", stringify!($name), ".rs"));

            #[test]
            fn runs() {
                main().unwrap();
            }
        }
    };
}

example!(score_micro_instance);
example!(validate_and_load);
example!(structure_blindness);
example!(generate_presets);
example!(random_errors);
example!(collapse_study);
example!(flatten_study);
