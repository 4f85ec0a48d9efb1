pub mod audit;
pub mod bench;
pub mod candidates;
pub mod factor;
pub mod fermat;

use std::fmt::Display;

/// `{a, b, c}`, eliding the middle of long lists.
pub fn brace_list<T: Display>(items: &[T]) -> String {
    const SHOW: usize = 12;
    let shown: Vec<String> = if items.len() <= SHOW {
        items.iter().map(ToString::to_string).collect()
    } else {
        let mut v: Vec<String> = items[..SHOW - 2].iter().map(ToString::to_string).collect();
        v.push("...".into());
        v.push(items[items.len() - 1].to_string());
        v
    };
    format!("{{{}}}", shown.join(", "))
}
